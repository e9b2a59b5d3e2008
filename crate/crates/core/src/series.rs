//! Truncated Laurent series in `x`, `y`, `u` with exact rational
//! coefficients, and the exponential substitution
//! `v = e^(x+y+u)`, `w = e^-x - e^x`, `z = e^-y - e^y`.
//!
//! A series is exact through its cutoff: every term of total degree at most
//! `cutoff` is known, and nothing above it is stored. Products and inverses
//! lower the cutoff by the orders of their factors, so substitution works at
//! a higher internal precision and truncates at the end.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{AlgebraInstance, AlgebraKind};
use crate::diagram::{BasedDiagram, CrossingId, Diagram, Sign};
use crate::laurent::LaurentPoly;
use crate::skein::{evaluate_based, EvalOptions, SkeinError};

pub const VARIABLES: [&str; 3] = ["x", "y", "u"];

pub type Exponents = [i32; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable `{0}` has no image in the substitution")]
    Unbound(String),
    #[error("series with lowest-order part `{0}` is not invertible")]
    NotInvertible(String),
    #[error("cutoff must be nonnegative, got {0}")]
    NegativeCutoff(i32),
    #[error("the report needs a homflypt-style instance, got {0}")]
    WrongInstance(String),
    #[error(transparent)]
    Skein(#[from] SkeinError),
}

fn degree(e: &Exponents) -> i32 {
    e.iter().sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    terms: BTreeMap<Exponents, BigRational>,
    cutoff: i32,
}

impl LaurentSeries {
    pub fn zero(cutoff: i32) -> Self {
        LaurentSeries { terms: BTreeMap::new(), cutoff }
    }

    pub fn constant(c: BigRational, cutoff: i32) -> Self {
        Self::monomial([0, 0, 0], c, cutoff)
    }

    pub fn monomial(e: Exponents, c: BigRational, cutoff: i32) -> Self {
        let mut s = Self::zero(cutoff);
        if !c.is_zero() && degree(&e) <= cutoff {
            s.terms.insert(e, c);
        }
        s
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: Exponents) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree of a stored term, or `cutoff + 1` when there is
    /// none (the series vanishes as far as it is known).
    pub fn order(&self) -> i32 {
        self.terms.keys().map(degree).min().unwrap_or(self.cutoff + 1)
    }

    pub fn min_degree_in(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[var]).min()
    }

    pub fn truncate(&self, cutoff: i32) -> Self {
        let cutoff = cutoff.min(self.cutoff);
        LaurentSeries {
            terms: self.terms.iter().filter(|(e, _)| degree(e) <= cutoff).map(|(e, c)| (*e, c.clone())).collect(),
            cutoff,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(self.cutoff.min(other.cutoff));
        for (e, c) in &other.terms {
            if degree(e) <= out.cutoff {
                add_term(&mut out.terms, *e, c.clone());
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentSeries { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(), cutoff: self.cutoff }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.cutoff);
        }
        LaurentSeries { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(), cutoff: self.cutoff }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cutoff = (self.cutoff + other.order()).min(other.cutoff + self.order());
        let mut by_degree: Vec<(i32, &Exponents, &BigRational)> =
            other.terms.iter().map(|(e, c)| (degree(e), e, c)).collect();
        by_degree.sort_by_key(|t| t.0);
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            let room = cutoff - degree(a);
            for (_, b, cb) in by_degree.iter().take_while(|t| t.0 <= room) {
                let e = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                add_term(&mut terms, e, ca * *cb);
            }
        }
        LaurentSeries { terms, cutoff }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(BigRational::one(), i32::MAX / 4);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        if n == 0 {
            acc.cutoff = self.cutoff.max(0);
        }
        acc
    }

    /// Inverts a series whose lowest-degree part is a single term `c·m`,
    /// as `(c·m)^-1 · Σ (-t)^k` with `s = c·m·(1 + t)`.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let o = self.order();
        let lowest: Vec<_> = self.terms.iter().filter(|(e, _)| degree(e) == o).collect();
        let [(m, c)] = lowest[..] else {
            let head = LaurentSeries {
                terms: lowest.into_iter().map(|(e, c)| (*e, c.clone())).collect(),
                cutoff: o,
            };
            return Err(SeriesError::NotInvertible(head.render_terms()));
        };
        let inv_head = LaurentSeries::monomial(m.map(|k| -k), c.recip(), i32::MAX / 4);
        let t = self.mul(&inv_head).sub(&Self::constant(BigRational::one(), i32::MAX / 4));
        let t = t.truncate(self.cutoff - o);
        let mut sum = Self::constant(BigRational::one(), t.cutoff);
        let mut power = sum.clone();
        let neg_t = t.neg();
        for _ in 0..=t.cutoff.max(0) {
            power = power.mul(&neg_t).truncate(t.cutoff);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        Ok(sum.mul(&inv_head).truncate(self.cutoff - 2 * o))
    }

    /// Numeric value at a point, summing the stored terms.
    pub fn eval_f64(&self, point: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                c * point[0].powi(e[0]) * point[1].powi(e[1]) * point[2].powi(e[2])
            })
            .sum()
    }

    fn render_terms(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut order: Vec<_> = self.terms.iter().collect();
        order.sort_by_key(|(e, _)| (degree(e), std::cmp::Reverse(**e)));
        let mut out = String::new();
        for (i, (e, c)) in order.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let vars: Vec<String> = e
                .iter()
                .zip(VARIABLES)
                .filter(|(k, _)| **k != 0)
                .map(|(k, v)| if *k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            if vars.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&vars.join("*"));
            } else {
                out.push_str(&format!("{mag}*{}", vars.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(degree > {})", self.render_terms(), self.cutoff)
    }
}

fn add_term(terms: &mut BTreeMap<Exponents, BigRational>, e: Exponents, c: BigRational) {
    let slot = terms.entry(e).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        terms.remove(&e);
    }
}

/// `exp(a·x + b·y + c·u)` through total degree `cutoff`, from the
/// multinomial expansion `Σ a^i b^j c^k x^i y^j u^k / (i! j! k!)`.
pub fn exp_series(form: Exponents, cutoff: i32) -> LaurentSeries {
    let mut out = LaurentSeries::zero(cutoff);
    if cutoff < 0 {
        return out;
    }
    // coeffs[v][n] = form[v]^n / n!
    let coeffs: Vec<Vec<BigRational>> = form
        .iter()
        .map(|&a| {
            let mut row = vec![BigRational::one()];
            for n in 1..=cutoff {
                let prev = row.last().expect("nonempty").clone();
                row.push(prev * BigRational::new(a.into(), n.into()));
            }
            row
        })
        .collect();
    let range = |v: usize| if form[v] == 0 { 0 } else { cutoff };
    for i in 0..=range(0) {
        for j in 0..=range(1).min(cutoff - i) {
            for k in 0..=range(2).min(cutoff - i - j) {
                let c = &coeffs[0][i as usize] * &coeffs[1][j as usize] * &coeffs[2][k as usize];
                if !c.is_zero() {
                    out.terms.insert([i, j, k], c);
                }
            }
        }
    }
    out
}

/// An integer combination of exponentials of linear forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpImage(pub Vec<(BigInt, Exponents)>);

impl ExpImage {
    pub fn one() -> Self {
        ExpImage(vec![(BigInt::one(), [0, 0, 0])])
    }

    /// A single exponential `±exp(form)`.
    pub fn single(sign: i32, form: Exponents) -> Self {
        ExpImage(vec![(BigInt::from(sign), form)])
    }

    pub fn series(&self, cutoff: i32) -> LaurentSeries {
        self.0.iter().fold(LaurentSeries::zero(cutoff), |acc, (c, form)| {
            acc.add(&exp_series(*form, cutoff).scale(&BigRational::from_integer(c.clone())))
        })
    }

    /// Exact product; exponentials multiply by adding their forms.
    pub fn mul(&self, other: &ExpImage) -> ExpImage {
        let mut acc: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (a, f) in &self.0 {
            for (b, g) in &other.0 {
                let e = [f[0] + g[0], f[1] + g[1], f[2] + g[2]];
                *acc.entry(e).or_insert_with(BigInt::zero) += a * b;
            }
        }
        ExpImage(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (c, e)).collect())
    }

    pub fn pow(&self, n: u32) -> ExpImage {
        (0..n).fold(ExpImage::one(), |acc, _| acc.mul(self))
    }

    /// The inverse when the image is a single `±exp(form)`.
    fn exact_inverse(&self) -> Option<ExpImage> {
        match &self.0[..] {
            [(c, f)] if c.abs().is_one() => Some(ExpImage(vec![(c.clone(), f.map(|k| -k))])),
            _ => None,
        }
    }

    /// Lowest total degree of the series, found by expanding until a
    /// nonzero term appears.
    fn order(&self) -> Option<i32> {
        let mut cutoff = 4;
        loop {
            let s = self.series(cutoff);
            if !s.is_zero() {
                return Some(s.order());
            }
            if cutoff > 256 || self.0.is_empty() {
                return None;
            }
            cutoff *= 2;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpSubstitution(pub BTreeMap<String, ExpImage>);

impl ExpSubstitution {
    /// `v = e^(x+y+u)`, `w = e^-x - e^x`, `z = e^-y - e^y`.
    pub fn standard() -> Self {
        let diff = |f: Exponents| ExpImage(vec![(BigInt::one(), f.map(|k| -k)), (-BigInt::one(), f)]);
        ExpSubstitution(
            [("v", ExpImage::single(1, [1, 1, 1])), ("w", diff([1, 0, 0])), ("z", diff([0, 1, 0]))]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    /// Numeric value of each image at a point.
    pub fn eval_f64(&self, point: [f64; 3]) -> HashMap<String, f64> {
        self.0
            .iter()
            .map(|(name, img)| {
                let v = img
                    .0
                    .iter()
                    .map(|(c, f)| {
                        let arg: f64 = (0..3).map(|i| f64::from(f[i]) * point[i]).sum();
                        c.to_f64().unwrap_or(f64::NAN) * arg.exp()
                    })
                    .sum();
                (name.clone(), v)
            })
            .collect()
    }
}

/// One monomial's image: an exact numerator and a denominator that still
/// has to be inverted as a series.
struct TermImage {
    coefficient: BigRational,
    numerator: ExpImage,
    denominator: Option<(Vec<(usize, u32)>, ExpImage)>,
}

/// The image of `a` under `s`, exact through total degree `cutoff`.
pub fn substitute_series(a: &LaurentPoly, s: &ExpSubstitution, cutoff: i32) -> Result<LaurentSeries, SeriesError> {
    if cutoff < 0 {
        return Err(SeriesError::NegativeCutoff(cutoff));
    }
    let names: Vec<&str> = a.ring().variables().iter().map(|v| v.name.as_str()).collect();
    let mut images = Vec::new();
    for (m, c) in a.terms() {
        let mut numerator = ExpImage::one();
        let mut denom: Vec<(usize, u32)> = Vec::new();
        let mut den_image = ExpImage::one();
        for (i, k) in m.factors() {
            let img = s.0.get(names[i]).ok_or_else(|| SeriesError::Unbound(names[i].to_string()))?;
            let p = img.pow(k.unsigned_abs());
            if k > 0 {
                numerator = numerator.mul(&p);
            } else if let Some(inv) = p.exact_inverse() {
                numerator = numerator.mul(&inv);
            } else {
                denom.push((i, k.unsigned_abs()));
                den_image = den_image.mul(&p);
            }
        }
        let denominator = (!denom.is_empty()).then_some((denom, den_image));
        images.push(TermImage { coefficient: BigRational::from_integer(c.clone()), numerator, denominator });
    }
    // Inverting a series of order k costs 2k degrees of precision, and the
    // product with the numerator gets some of it back; start with the full
    // loss and widen only if that was not enough.
    let mut orders: HashMap<Vec<(usize, u32)>, i32> = HashMap::new();
    let mut loss = 0;
    for t in &images {
        if let Some((key, img)) = &t.denominator {
            if !orders.contains_key(key) {
                let o = img.order().ok_or_else(|| SeriesError::NotInvertible("0".into()))?;
                orders.insert(key.clone(), o);
            }
            loss = loss.max(2 * orders[key].max(0));
        }
    }
    let mut working = cutoff + loss;
    loop {
        let r = combine(&images, working)?;
        if r.cutoff >= cutoff {
            return Ok(r.truncate(cutoff));
        }
        working += cutoff - r.cutoff;
    }
}

fn combine(images: &[TermImage], working: i32) -> Result<LaurentSeries, SeriesError> {
    let mut inverses: HashMap<&[(usize, u32)], LaurentSeries> = HashMap::new();
    let mut total: Option<LaurentSeries> = None;
    for t in images {
        let mut term = t.numerator.series(working).scale(&t.coefficient);
        if let Some((key, img)) = &t.denominator {
            if !inverses.contains_key(key.as_slice()) {
                inverses.insert(key.as_slice(), img.series(working).inverse()?);
            }
            term = term.mul(&inverses[key.as_slice()]);
        }
        total = Some(match total {
            None => term,
            Some(acc) => acc.add(&term),
        });
    }
    Ok(total.unwrap_or_else(|| LaurentSeries::zero(working)))
}

/// Lowest exponent observed in a skein difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeObservation {
    Finite(i32),
    /// The difference is exactly zero.
    Infinite,
    /// Nonzero, but every term lies above the cutoff.
    BeyondCutoff,
}

impl fmt::Display for DegreeObservation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeObservation::Finite(d) => write!(f, "{d}"),
            DegreeObservation::Infinite => f.write_str("+inf"),
            DegreeObservation::BeyondCutoff => f.write_str("beyond cutoff"),
        }
    }
}

impl Serialize for DegreeObservation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DegreeObservation::Finite(d) => s.serialize_i32(*d),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VassilievReport {
    pub crossing: CrossingId,
    pub self_crossing: bool,
    /// `W(L+) - W(L-)` in the `v, w, z` carrier.
    pub difference: String,
    pub min_x_degree: DegreeObservation,
    pub min_y_degree: DegreeObservation,
    pub leading_terms: Vec<String>,
    pub cutoff: i32,
}

impl fmt::Display for VassilievReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.self_crossing { "self" } else { "mixed" };
        writeln!(f, "crossing {} ({kind})", self.crossing)?;
        writeln!(f, "W(L+) - W(L-) = {}", self.difference)?;
        writeln!(f, "min x-degree: {}", self.min_x_degree)?;
        writeln!(f, "min y-degree: {}", self.min_y_degree)?;
        writeln!(f, "leading terms: {}", self.leading_terms.join(", "))?;
        write!(f, "cutoff: {}", self.cutoff)
    }
}

/// How many lowest-degree terms the report lists.
const LEADING_TERMS: usize = 6;

/// Measures the skein difference at crossing `c` under the exponential
/// substitution. Reports degrees; asserts nothing.
pub fn vassiliev_report(
    d: &Diagram,
    c: CrossingId,
    inst: &std::sync::Arc<AlgebraInstance>,
    cutoff: i32,
) -> Result<VassilievReport, SeriesError> {
    if *inst.kind() != AlgebraKind::HomflyptStyle {
        return Err(SeriesError::WrongInstance(inst.name()));
    }
    let x = d.crossing(c).map_err(SkeinError::from)?;
    let self_crossing = d.kind(x) == crate::diagram::CrossingKind::SelfCrossing;
    let switched = d.switch(c).map_err(SkeinError::from)?;
    let opts = EvalOptions::fast();
    let here = evaluate_based(&BasedDiagram::standard(d.clone()), inst, &opts)?.0;
    let there = evaluate_based(&BasedDiagram::standard(switched), inst, &opts)?.0;
    let (plus, minus) = if x.sign() == Sign::Positive { (here, there) } else { (there, here) };
    let diff = plus.value() - minus.value();
    let series = substitute_series(&diff, &ExpSubstitution::standard(), cutoff)?;
    let observe = |var: usize| {
        if diff.is_zero() {
            DegreeObservation::Infinite
        } else {
            series.min_degree_in(var).map_or(DegreeObservation::BeyondCutoff, DegreeObservation::Finite)
        }
    };
    let mut lowest: Vec<_> = series.terms().collect();
    lowest.sort_by_key(|(e, _)| (degree(e), std::cmp::Reverse(**e)));
    let leading_terms = lowest
        .into_iter()
        .take(LEADING_TERMS)
        .map(|(e, c)| LaurentSeries::monomial(*e, c.clone(), i32::MAX / 4).render_terms())
        .collect();
    Ok(VassilievReport {
        crossing: c,
        self_crossing,
        difference: diff.to_string(),
        min_x_degree: observe(0),
        min_y_degree: observe(1),
        leading_terms,
        cutoff,
    })
}
