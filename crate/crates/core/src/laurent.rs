//! Exact multivariate Laurent polynomials over the integers.
//!
//! A [`RingSpec`] names the variables of a ring such as `Z[p^±1, q^±1, r]`
//! and records which of them may carry negative exponents. A
//! [`LaurentPoly`] is a sparse map from [`Monomial`] to a nonzero
//! [`BigInt`] coefficient, always kept in canonical form, so structural
//! equality is polynomial equality.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

mod parse;

pub use parse::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("duplicate variable `{0}` in ring")]
    DuplicateVariable(String),
    #[error("polynomials live in different rings: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error("negative exponent {exp} requested for a non-unit polynomial")]
    NegativePower { exp: i64 },
    #[error("`{0}` is not a unit: {1}")]
    NotAUnit(String, &'static str),
    #[error("variable `{0}` is not bound by the substitution")]
    UnboundVariable(String),
    #[error("variable `{0}` does not exist in the target ring")]
    UnknownVariable(String),
    #[error("variable `{0}` is not invertible, negative exponent not allowed")]
    NotInvertible(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub invertible: bool,
}

/// The ordered variable list of a Laurent polynomial ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    vars: Arc<[Variable]>,
}

impl RingSpec {
    pub fn new<I, S>(vars: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (S, bool)>,
        S: Into<String>,
    {
        let vars: Vec<Variable> = vars
            .into_iter()
            .map(|(name, invertible)| Variable { name: name.into(), invertible })
            .collect();
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(LaurentError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(RingSpec { vars: vars.into() })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.vars[i].invertible
    }

    /// A new ring with `extra` appended after the existing variables.
    pub fn extended<I, S>(&self, extra: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (S, bool)>,
        S: Into<String>,
    {
        let all: Vec<(String, bool)> = self
            .vars
            .iter()
            .map(|v| (v.name.clone(), v.invertible))
            .chain(extra.into_iter().map(|(s, b)| (s.into(), b)))
            .collect();
        RingSpec::new(all)
    }

    fn same(&self, other: &RingSpec) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[")?;
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if v.invertible {
                write!(f, "{}^±1", v.name)?;
            } else {
                write!(f, "{}", v.name)?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exponent vector aligned with the variable order of a [`RingSpec`].
///
/// A zero entry means the variable does not occur; the sparse view is
/// available through [`Monomial::factors`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Box<[i32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into())
    }

    pub fn from_exponents(exps: Vec<i32>) -> Self {
        Monomial(exps.into())
    }

    pub fn var(nvars: usize, i: usize, exp: i32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = exp;
        Monomial(e.into())
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> i32 {
        self.0[i]
    }

    /// Nonzero `(variable index, exponent)` pairs.
    pub fn factors(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.0.iter().copied().enumerate().filter(|&(_, e)| e != 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    fn respects(&self, ring: &RingSpec) -> bool {
        self.factors().all(|(i, e)| e > 0 || ring.is_invertible(i))
    }

    /// Render order: ascending total degree, then descending lexicographic
    /// exponents in ring order.
    fn render_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// Exact Laurent polynomial in canonical sparse form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    ring: RingSpec,
    terms: BTreeMap<Monomial, BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    Plain,
    Latex,
}

impl LaurentPoly {
    pub fn zero(ring: &RingSpec) -> Self {
        LaurentPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &RingSpec) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &RingSpec, c: impl Into<BigInt>) -> Self {
        Self::monomial(ring, Monomial::one(ring.len()), c)
    }

    /// The variable `name` to the first power.
    ///
    /// Panics if `name` is not a variable of `ring`.
    pub fn var(ring: &RingSpec, name: &str) -> Self {
        let i = ring
            .index_of(name)
            .unwrap_or_else(|| panic!("no variable `{name}` in {ring}"));
        Self::monomial(ring, Monomial::var(ring.len(), i, 1), 1)
    }

    pub fn monomial(ring: &RingSpec, m: Monomial, c: impl Into<BigInt>) -> Self {
        assert_eq!(m.0.len(), ring.len(), "monomial arity does not match ring");
        assert!(m.respects(ring), "negative exponent on a non-invertible variable");
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { ring: ring.clone(), terms }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates and
    /// dropping zeros.
    pub fn from_terms<I>(ring: &RingSpec, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut out = LaurentPoly::zero(ring);
        for (m, c) in terms {
            if m.0.len() != ring.len() {
                return Err(LaurentError::UnknownVariable(format!("{:?}", m.0)));
            }
            if let Some((i, _)) = m.factors().find(|&(i, e)| e < 0 && !ring.is_invertible(i)) {
                return Err(LaurentError::NotInvertible(ring.vars[i].name.clone()));
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &LaurentPoly) -> Result<(), LaurentError> {
        if self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(LaurentError::RingMismatch(self.ring.clone(), other.ring.clone()))
        }
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<Self, LaurentError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<Self, LaurentError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<Self, LaurentError> {
        self.check_ring(other)?;
        let mut out = LaurentPoly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = LaurentPoly::zero(&self.ring);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = LaurentPoly::one(&self.ring);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Integer power; negative exponents are only defined for units.
    pub fn powi(&self, n: i64) -> Result<Self, LaurentError> {
        let exp = u32::try_from(n.unsigned_abs()).map_err(|_| LaurentError::NegativePower { exp: n })?;
        if n >= 0 {
            return Ok(self.pow(exp));
        }
        match self.unit_inverse() {
            Ok(inv) => Ok(inv.pow(exp)),
            Err(_) => Err(LaurentError::NegativePower { exp: n }),
        }
    }

    /// `Some((sign, monomial))` if the polynomial is ±1 times a monomial of
    /// invertible variables.
    pub fn as_unit(&self) -> Option<(bool, &Monomial)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        let all_invertible = m.factors().all(|(i, _)| self.ring.is_invertible(i));
        if c.abs().is_one() && all_invertible {
            Some((c.is_negative(), m))
        } else {
            None
        }
    }

    fn unit_check(&self) -> Result<(bool, Monomial), LaurentError> {
        if self.terms.len() != 1 {
            return Err(LaurentError::NotAUnit(self.render(RenderStyle::Plain), "not a single term"));
        }
        let (m, c) = self.terms.iter().next().expect("one term");
        if !c.abs().is_one() {
            return Err(LaurentError::NotAUnit(self.render(RenderStyle::Plain), "coefficient is not ±1"));
        }
        if m.factors().any(|(i, _)| !self.ring.is_invertible(i)) {
            return Err(LaurentError::NotAUnit(
                self.render(RenderStyle::Plain),
                "involves a non-invertible variable",
            ));
        }
        Ok((c.is_negative(), m.clone()))
    }

    pub fn unit_inverse(&self) -> Result<Self, LaurentError> {
        let (neg, m) = self.unit_check()?;
        Ok(LaurentPoly::monomial(&self.ring, m.inverse(), if neg { -1 } else { 1 }))
    }

    /// Exact division by a unit `±m`.
    pub fn unit_divide(&self, unit: &LaurentPoly) -> Result<Self, LaurentError> {
        self.check_ring(unit)?;
        let (neg, m) = unit.unit_check()?;
        let inv = m.inverse();
        let mut out = LaurentPoly::zero(&self.ring);
        for (t, c) in &self.terms {
            out.add_term(t.mul(&inv), if neg { -c } else { c.clone() });
        }
        Ok(out)
    }

    /// Image under the ring map sending each variable `x` to `bindings[x]`,
    /// all of which must live in `target`.
    pub fn substitute(
        &self,
        bindings: &HashMap<String, LaurentPoly>,
        target: &RingSpec,
    ) -> Result<Self, LaurentError> {
        let mut images = Vec::with_capacity(self.ring.len());
        for v in self.ring.variables() {
            let img = bindings
                .get(&v.name)
                .ok_or_else(|| LaurentError::UnboundVariable(v.name.clone()))?;
            if !img.ring.same(target) {
                return Err(LaurentError::RingMismatch(img.ring.clone(), target.clone()));
            }
            images.push(img);
        }
        let mut powers: HashMap<(usize, i32), LaurentPoly> = HashMap::new();
        let mut out = LaurentPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = LaurentPoly::constant(target, c.clone());
            for (i, e) in m.factors() {
                let p = match powers.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = images[i].powi(e as i64).map_err(|_| {
                            LaurentError::NotAUnit(
                                images[i].render(RenderStyle::Plain),
                                "image of a negatively powered variable must be a unit",
                            )
                        })?;
                        powers.insert((i, e), p.clone());
                        p
                    }
                };
                term = &term * &p;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial in a ring that contains every variable
    /// (by name) of the current ring.
    pub fn embed(&self, target: &RingSpec) -> Result<Self, LaurentError> {
        let mut map = Vec::with_capacity(self.ring.len());
        for v in self.ring.variables() {
            let j = target
                .index_of(&v.name)
                .ok_or_else(|| LaurentError::UnknownVariable(v.name.clone()))?;
            map.push(j);
        }
        let mut out = LaurentPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, x) in m.factors() {
                if x < 0 && !target.is_invertible(map[i]) {
                    return Err(LaurentError::NotInvertible(v_name(&self.ring, i)));
                }
                e[map[i]] = x;
            }
            out.add_term(Monomial::from_exponents(e), c.clone());
        }
        Ok(out)
    }

    /// Evaluates at a rational point given in ring variable order. Returns
    /// `None` when a negative power of zero would be needed.
    pub fn eval_rational(&self, point: &[BigRational]) -> Option<BigRational> {
        assert_eq!(point.len(), self.ring.len());
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (i, e) in m.factors() {
                if e < 0 && point[i].is_zero() {
                    return None;
                }
                t *= num_traits::pow::Pow::pow(&point[i], e);
            }
            sum += t;
        }
        Some(sum)
    }

    pub fn parse(text: &str, ring: &RingSpec) -> Result<Self, LaurentError> {
        parse::parse(text, ring)
    }

    pub fn render(&self, style: RenderStyle) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.render_cmp(b.0));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let factors: Vec<String> = m
                .factors()
                .map(|(i, e)| {
                    let name = &self.ring.vars[i].name;
                    match (style, e) {
                        (_, 1) => name.clone(),
                        (RenderStyle::Plain, e) => format!("{name}^{e}"),
                        (RenderStyle::Latex, e) => format!("{name}^{{{e}}}"),
                    }
                })
                .collect();
            let sep = match style {
                RenderStyle::Plain => "*",
                RenderStyle::Latex => " ",
            };
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push_str(sep);
                }
                out.push_str(&factors.join(sep));
            }
        }
        out
    }
}

fn v_name(ring: &RingSpec, i: usize) -> String {
    ring.vars[i].name.clone()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::Plain))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.render(RenderStyle::Plain))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("ring mismatch")
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$checked(&rhs).expect("ring mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pqr() -> RingSpec {
        RingSpec::new([("p", true), ("q", true), ("r", false)]).unwrap()
    }

    fn poly(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, &pqr()).unwrap()
    }

    #[test]
    fn duplicate_variable_rejected() {
        assert!(matches!(
            RingSpec::new([("p", true), ("p", false)]),
            Err(LaurentError::DuplicateVariable(_))
        ));
    }

    #[test]
    fn parse_two_terms() {
        let f = poly("p + q*r");
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coefficient(&Monomial::from_exponents(vec![1, 0, 0])), BigInt::from(1));
        assert_eq!(f.coefficient(&Monomial::from_exponents(vec![0, 1, 1])), BigInt::from(1));
    }

    #[test]
    fn parse_unit_value_a2() {
        let a2 = poly("(1-p)/q");
        let ring = pqr();
        let expected = LaurentPoly::monomial(&ring, Monomial::from_exponents(vec![0, -1, 0]), 1)
            - LaurentPoly::monomial(&ring, Monomial::from_exponents(vec![1, -1, 0]), 1);
        assert_eq!(a2, expected);
        assert_eq!(a2.to_string(), "q^-1 - p*q^-1");
    }

    #[test]
    fn parse_negative_exponents() {
        let f = poly("p^-3*q^-2");
        assert_eq!(f.num_terms(), 1);
        let (m, c) = f.terms().next().unwrap();
        assert_eq!(m.exponents(), &[-3, -2, 0]);
        assert!(c.is_one());
    }

    #[test]
    fn additive_inverse() {
        assert!((poly("2*p - p^2") + poly("p^2 - 2*p")).is_zero());
    }

    #[test]
    fn square_of_a2_is_a3() {
        let a2 = poly("(1-p)/q");
        assert_eq!(&a2 * &a2, poly("q^-2 - 2*p*q^-2 + p^2*q^-2"));
    }

    #[test]
    fn zeroth_power_is_one() {
        assert!(poly("q").pow(0).is_one());
    }

    #[test]
    fn negative_power_needs_unit() {
        assert_eq!(poly("q").powi(-2).unwrap(), poly("q^-2"));
        assert!(matches!(poly("1 + q").powi(-1), Err(LaurentError::NegativePower { .. })));
    }

    #[test]
    fn unit_division() {
        assert_eq!(poly("p*r + q^2").unit_divide(&poly("p")).unwrap(), poly("r + q^2*p^-1"));
        assert!(poly("0").unit_divide(&poly("p")).unwrap().is_zero());
        assert_eq!(poly("p - p^2").unit_divide(&poly("-p")).unwrap(), poly("p - 1"));
    }

    #[test]
    fn unit_division_errors() {
        assert!(matches!(poly("p").unit_divide(&poly("r")), Err(LaurentError::NotAUnit(..))));
        assert!(matches!(poly("p").unit_divide(&poly("2*p")), Err(LaurentError::NotAUnit(..))));
        assert!(matches!(poly("p").unit_divide(&poly("p + q")), Err(LaurentError::NotAUnit(..))));
    }

    #[test]
    fn ring_mismatch() {
        let other = RingSpec::new([("v", true)]).unwrap();
        let v = LaurentPoly::var(&other, "v");
        assert!(matches!(poly("p").checked_add(&v), Err(LaurentError::RingMismatch(..))));
    }

    #[test]
    fn substitution_homflypt_style() {
        let vwz = RingSpec::new([("v", true), ("w", true), ("z", false)]).unwrap();
        let v = LaurentPoly::var(&vwz, "v");
        let w = LaurentPoly::var(&vwz, "w");
        let z = LaurentPoly::var(&vwz, "z");
        let b: HashMap<String, LaurentPoly> = [
            ("p".to_string(), v.pow(2)),
            ("q".to_string(), &v * &w),
            ("r".to_string(), &v * &z),
        ]
        .into_iter()
        .collect();
        let img = poly("p + q*r").substitute(&b, &vwz).unwrap();
        assert_eq!(img, LaurentPoly::parse("v^2 + v^2*w*z", &vwz).unwrap());
        // negative powers of q need q's image to be a unit
        let img = poly("(1-p)/q").substitute(&b, &vwz).unwrap();
        assert_eq!(img, LaurentPoly::parse("v^-1*w^-1 - v*w^-1", &vwz).unwrap());
    }

    #[test]
    fn substitution_collapse_and_identity() {
        let ring = pqr();
        let mut b: HashMap<String, LaurentPoly> = ["p", "q", "r"]
            .iter()
            .map(|n| (n.to_string(), LaurentPoly::var(&ring, n)))
            .collect();
        let f = poly("2*p - p^2 + q*r");
        assert_eq!(f.substitute(&b, &ring).unwrap(), f);
        b.insert("r".into(), LaurentPoly::var(&ring, "q"));
        assert_eq!(f.substitute(&b, &ring).unwrap(), poly("2*p - p^2 + q^2"));
    }

    #[test]
    fn substitution_errors() {
        let ring = pqr();
        let b: HashMap<String, LaurentPoly> =
            [("p".to_string(), LaurentPoly::var(&ring, "p"))].into_iter().collect();
        assert!(matches!(poly("p + q").substitute(&b, &ring), Err(LaurentError::UnboundVariable(_))));
        let b: HashMap<String, LaurentPoly> = [
            ("p".to_string(), poly("1 + p")),
            ("q".to_string(), poly("q")),
            ("r".to_string(), poly("r")),
        ]
        .into_iter()
        .collect();
        assert!(matches!(poly("p^-1").substitute(&b, &ring), Err(LaurentError::NotAUnit(..))));
    }

    #[test]
    fn render_examples() {
        assert_eq!(poly("0").to_string(), "0");
        assert_eq!(poly("p^-5*q^2*r^4").to_string(), "p^-5*q^2*r^4");
        assert_eq!(poly("q*r + 2*p - p^2").to_string(), "2*p - p^2 + q*r");
        assert_eq!(poly("-1").to_string(), "-1");
        assert_eq!(poly("3*p^-1*r^2").render(RenderStyle::Latex), "3 p^{-1} r^{2}");
    }

    #[test]
    fn embed_into_extended_ring() {
        let ext = pqr().extended([("alpha", false)]).unwrap();
        let f = poly("p^-1 + r").embed(&ext).unwrap();
        assert_eq!(f, LaurentPoly::parse("p^-1 + r", &ext).unwrap());
        let small = RingSpec::new([("p", false), ("q", true), ("r", false)]).unwrap();
        assert!(matches!(poly("p^-1").embed(&small), Err(LaurentError::NotInvertible(_))));
    }

    #[test]
    fn rational_evaluation() {
        let half = BigRational::new(1.into(), 2.into());
        let pt = vec![half.clone(), BigRational::from_integer(3.into()), BigRational::zero()];
        assert_eq!(poly("p^-1 + q*r + 1").eval_rational(&pt), Some(BigRational::from_integer(3.into())));
        let pt0 = vec![BigRational::zero(), half.clone(), half];
        assert_eq!(poly("p^-1").eval_rational(&pt0), None);
    }
}
