#![allow(dead_code)]

use std::sync::Arc;

use polarlift_core::algebra::{build_classical, Family, LieAlgebra};
use polarlift_core::bundle::{make_symmetric_pair, split_isotropy, BundleSplit};
use polarlift_core::isotropy::{isotropy_generators, IsotropyKind, KChoice};

pub fn split_on(g: LieAlgebra, kind: IsotropyKind, choice: KChoice) -> BundleSplit {
    let g = Arc::new(g);
    let gens = isotropy_generators(&g, kind).unwrap();
    let pair = make_symmetric_pair(Arc::clone(&g), &gens.h).unwrap();
    split_isotropy(&pair, gens.k(choice)).unwrap()
}

pub fn split(family: Family, n: usize, kind: IsotropyKind, choice: KChoice) -> BundleSplit {
    split_on(build_classical(family, n).unwrap(), kind, choice)
}

pub fn berger() -> BundleSplit {
    split(Family::Su, 2, IsotropyKind::Torus, KChoice::Trivial)
}

pub fn cp2() -> BundleSplit {
    split(Family::Su, 3, IsotropyKind::SuBlock { p: 2, q: 1 }, KChoice::First)
}

pub fn sp2() -> BundleSplit {
    split(Family::Sp, 2, IsotropyKind::SpBlock { p: 1, q: 1 }, KChoice::First)
}

pub fn su4_so4() -> BundleSplit {
    split(Family::Su, 4, IsotropyKind::SuReal, KChoice::First)
}

pub fn product_control() -> BundleSplit {
    let su2 = build_classical(Family::Su, 2).unwrap();
    split_on(su2.direct_sum(&su2), IsotropyKind::Torus, KChoice::Trivial)
}
