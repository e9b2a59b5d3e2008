#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use gconway::algebra::{make_instance, AlgebraInstance, AlgebraKind};
use gconway::catalog::{bundled_catalog_path, load_catalog, LinkRecord};
use gconway::laurent::{LaurentPoly, Monomial, RingSpec};
use rand::Rng;

pub fn bundled() -> Vec<LinkRecord> {
    load_catalog(bundled_catalog_path()).expect("bundled catalog loads")
}

pub fn record(name: &str) -> LinkRecord {
    bundled().into_iter().find(|r| r.name == name).unwrap_or_else(|| panic!("no record {name}"))
}

pub fn generic() -> Arc<AlgebraInstance> {
    make_instance(AlgebraKind::GenericLinear).unwrap()
}

pub fn homflypt() -> Arc<AlgebraInstance> {
    make_instance(AlgebraKind::Homflypt).unwrap()
}

pub fn homflypt_style() -> Arc<AlgebraInstance> {
    make_instance(AlgebraKind::HomflyptStyle).unwrap()
}

/// A random polynomial with up to `terms` terms and exponents in
/// `-span..=span`, respecting which variables are invertible.
pub fn random_poly(rng: &mut impl Rng, ring: &RingSpec, terms: usize, span: i32) -> LaurentPoly {
    let n = ring.len();
    let mut acc = LaurentPoly::zero(ring);
    for _ in 0..rng.gen_range(1..=terms) {
        let exps: Vec<i32> = (0..n)
            .map(|i| if ring.is_invertible(i) { rng.gen_range(-span..=span) } else { rng.gen_range(0..=span) })
            .collect();
        let c: i64 = loop {
            let c = rng.gen_range(-9..=9);
            if c != 0 {
                break c;
            }
        };
        acc = &acc + &LaurentPoly::monomial(ring, Monomial::from_exponents(exps), c);
    }
    acc
}
