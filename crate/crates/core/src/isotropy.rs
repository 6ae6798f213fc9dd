//! Named isotropy subalgebras `h ⊂ g` together with a split of `h` into two
//! ideal factors, as listed for the classical bundles `G/K₁ → G/H` and
//! `G/K₂ → G/H`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::algebra::{rotation, so_raw, sp_element, sp_raw_on, su_diagonal_raw, su_raw, CMat, Family, LieAlgebra};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsotropyKind {
    /// `s(u(p) ⊕ u(q)) ⊂ su(p+q)`; factors `su(p) ⊕ su(q)` and the center `u(1)`.
    SuBlock { p: usize, q: usize },
    /// `s(u(p) ⊕ u(q)) ⊂ su(p+q)`; factors `su(p) ⊕ u(1)` and `su(q)`.
    SuBlockU { p: usize, q: usize },
    /// `so(n) ⊂ su(n)`; for `n = 4` the factors are the two `so(3)` ideals.
    SuReal,
    /// `so(n) ⊂ su(n)` with the leading `so(n−1)` block as first factor.
    /// That block is not an ideal; used as a negative control.
    SuRealLeading,
    /// `so(p) ⊕ so(q) ⊂ so(p+q)`.
    SoBlock { p: usize, q: usize },
    /// `so(4) ⊕ so(q) ⊂ so(4+q)`; factors `so(3)₊ ⊕ so(q)` and `so(3)₋`.
    SoBlock4 { q: usize },
    /// `u(n) ⊂ so(2n)`; factors `su(n)` and `u(1)`.
    SoComplex,
    /// `sp(p) ⊕ sp(q) ⊂ sp(p+q)`.
    SpBlock { p: usize, q: usize },
    /// `u(n) ⊂ sp(n)`; factors `su(n)` and `u(1)`.
    SpComplex,
    /// Maximal diagonal torus of every `su` summand; first factor is the
    /// torus of the first summand.
    Torus,
}

impl fmt::Display for IsotropyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsotropyKind::SuBlock { p, q } => write!(f, "su-block {p} {q}"),
            IsotropyKind::SuBlockU { p, q } => write!(f, "su-block-u {p} {q}"),
            IsotropyKind::SuReal => f.write_str("su-real"),
            IsotropyKind::SuRealLeading => f.write_str("su-real-leading"),
            IsotropyKind::SoBlock { p, q } => write!(f, "so-block {p} {q}"),
            IsotropyKind::SoBlock4 { q } => write!(f, "so-block-4 {q}"),
            IsotropyKind::SoComplex => f.write_str("so-complex"),
            IsotropyKind::SpBlock { p, q } => write!(f, "sp-block {p} {q}"),
            IsotropyKind::SpComplex => f.write_str("sp-complex"),
            IsotropyKind::Torus => f.write_str("torus"),
        }
    }
}

impl FromStr for IsotropyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let (name, args) = tokens.split_first().ok_or_else(|| "empty isotropy".to_string())?;
        let nums: Vec<usize> = args
            .iter()
            .map(|a| a.parse::<usize>().map_err(|_| format!("bad integer `{a}`")))
            .collect::<std::result::Result<_, _>>()?;
        let arity = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(format!("`{name}` takes {k} integer parameter(s), got {}", nums.len()))
            }
        };
        let kind = match *name {
            "su-block" => arity(2).map(|_| IsotropyKind::SuBlock { p: nums[0], q: nums[1] }),
            "su-block-u" => arity(2).map(|_| IsotropyKind::SuBlockU { p: nums[0], q: nums[1] }),
            "su-real" => arity(0).map(|_| IsotropyKind::SuReal),
            "su-real-leading" => arity(0).map(|_| IsotropyKind::SuRealLeading),
            "so-block" => arity(2).map(|_| IsotropyKind::SoBlock { p: nums[0], q: nums[1] }),
            "so-block-4" => arity(1).map(|_| IsotropyKind::SoBlock4 { q: nums[0] }),
            "so-complex" => arity(0).map(|_| IsotropyKind::SoComplex),
            "sp-block" => arity(2).map(|_| IsotropyKind::SpBlock { p: nums[0], q: nums[1] }),
            "sp-complex" => arity(0).map(|_| IsotropyKind::SpComplex),
            "torus" => arity(0).map(|_| IsotropyKind::Torus),
            other => Err(format!("unknown isotropy construction `{other}`")),
        }?;
        if let IsotropyKind::SuBlock { p, q }
        | IsotropyKind::SuBlockU { p, q }
        | IsotropyKind::SoBlock { p, q }
        | IsotropyKind::SpBlock { p, q } = kind
        {
            if p == 0 || q == 0 {
                return Err("block sizes must be positive".into());
            }
        }
        Ok(kind)
    }
}

/// Which ideal factor of `h` plays the role of `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KChoice {
    First,
    Second,
    Trivial,
}

impl fmt::Display for KChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KChoice::First => "first",
            KChoice::Second => "second",
            KChoice::Trivial => "trivial",
        })
    }
}

impl FromStr for KChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "first" => Ok(KChoice::First),
            "second" => Ok(KChoice::Second),
            "trivial" => Ok(KChoice::Trivial),
            other => Err(format!("invalid k choice `{other}` (expected first | second | trivial)")),
        }
    }
}

/// Generators (in algebra coordinates) of `h` and of its two factors.
#[derive(Clone, Debug)]
pub struct IsotropyGenerators {
    pub h: Vec<DVector<f64>>,
    pub first: Vec<DVector<f64>>,
    pub second: Vec<DVector<f64>>,
}

impl IsotropyGenerators {
    pub fn k(&self, choice: KChoice) -> &[DVector<f64>] {
        match choice {
            KChoice::First => &self.first,
            KChoice::Second => &self.second,
            KChoice::Trivial => &[],
        }
    }
}

fn single_summand(g: &LieAlgebra, construction: &str, family: Family) -> Result<usize> {
    let unsupported = || Error::UnsupportedConstruction {
        construction: construction.to_string(),
        algebra: g.label().to_string(),
    };
    match g.summands() {
        [s] => match s.kind {
            Some((f, n)) if f == family => Ok(n),
            _ => Err(unsupported()),
        },
        _ => Err(unsupported()),
    }
}

fn coords_of(g: &LieAlgebra, summand: usize, mats: &[DMatrix<f64>]) -> Result<Vec<DVector<f64>>> {
    mats.iter().map(|m| g.expand(&g.embed_in_summand(summand, m))).collect()
}

fn encode_all(ms: &[CMat]) -> Vec<DMatrix<f64>> {
    ms.iter().map(CMat::encode).collect()
}

fn so_block(n: usize, range: std::ops::Range<usize>) -> Vec<DMatrix<f64>> {
    let mut out = Vec::new();
    for i in range.clone() {
        for j in i + 1..range.end {
            out.push(rotation(n, i, j));
        }
    }
    out
}

/// The two `so(3)` ideals of `so(4)` on indices `offset..offset+4`
/// (self-dual, anti-self-dual).
fn so4_ideals(n: usize, offset: usize) -> (Vec<DMatrix<f64>>, Vec<DMatrix<f64>>) {
    let r = |i: usize, j: usize| rotation(n, offset + i, offset + j);
    let plus = vec![r(0, 1) + r(2, 3), r(0, 2) - r(1, 3), r(0, 3) + r(1, 2)];
    let minus = vec![r(0, 1) - r(2, 3), r(0, 2) + r(1, 3), r(0, 3) - r(1, 2)];
    (plus, minus)
}

fn complex_scalar(n: usize) -> CMat {
    CMat { re: DMatrix::zeros(n, n), im: DMatrix::identity(n, n) }
}

pub fn isotropy_generators(g: &LieAlgebra, kind: IsotropyKind) -> Result<IsotropyGenerators> {
    let name = kind.to_string();
    let bad_params = || Error::UnsupportedConstruction { construction: name.clone(), algebra: g.label().to_string() };
    let (first, second): (Vec<DMatrix<f64>>, Vec<DMatrix<f64>>) = match kind {
        IsotropyKind::SuBlock { p, q } | IsotropyKind::SuBlockU { p, q } => {
            let n = single_summand(g, &name, Family::Su)?;
            if p + q != n {
                return Err(bad_params());
            }
            let sp: Vec<CMat> = su_raw(p).iter().map(|m| m.placed(n, 0)).collect();
            let sq: Vec<CMat> = su_raw(q).iter().map(|m| m.placed(n, p)).collect();
            let mut center = CMat::zeros(n);
            for i in 0..n {
                center.im[(i, i)] = if i < p { q as f64 } else { -(p as f64) };
            }
            if let IsotropyKind::SuBlock { .. } = kind {
                let mut first = encode_all(&sp);
                first.extend(encode_all(&sq));
                (first, vec![center.encode()])
            } else {
                let mut first = encode_all(&sp);
                first.push(center.encode());
                (first, encode_all(&sq))
            }
        }
        IsotropyKind::SuReal | IsotropyKind::SuRealLeading => {
            let n = single_summand(g, &name, Family::Su)?;
            let real = |m: DMatrix<f64>| CMat { re: m, im: DMatrix::zeros(n, n) }.encode();
            match kind {
                IsotropyKind::SuReal if n == 4 => {
                    let (plus, minus) = so4_ideals(n, 0);
                    (plus.into_iter().map(real).collect(), minus.into_iter().map(real).collect())
                }
                IsotropyKind::SuReal => (so_raw(n).into_iter().map(real).collect(), Vec::new()),
                _ => {
                    // h = so(n) is carried by `first ∪ second`.
                    let leading: Vec<_> = so_block(n, 0..n - 1).into_iter().map(real).collect();
                    let rest: Vec<_> = (0..n - 1).map(|i| real(rotation(n, i, n - 1))).collect();
                    (leading, rest)
                }
            }
        }
        IsotropyKind::SoBlock { p, q } => {
            let n = single_summand(g, &name, Family::So)?;
            if p + q != n {
                return Err(bad_params());
            }
            (so_block(n, 0..p), so_block(n, p..n))
        }
        IsotropyKind::SoBlock4 { q } => {
            let n = single_summand(g, &name, Family::So)?;
            if n != 4 + q {
                return Err(bad_params());
            }
            let (mut plus, minus) = so4_ideals(n, 0);
            plus.extend(so_block(n, 4..n));
            (plus, minus)
        }
        IsotropyKind::SoComplex => {
            let n = single_summand(g, &name, Family::So)?;
            if n % 2 != 0 {
                return Err(bad_params());
            }
            let m = n / 2;
            (encode_all(&su_raw(m)), vec![complex_scalar(m).encode()])
        }
        IsotropyKind::SpBlock { p, q } => {
            let n = single_summand(g, &name, Family::Sp)?;
            if p + q != n {
                return Err(bad_params());
            }
            (encode_all(&sp_raw_on(n, 0..p)), encode_all(&sp_raw_on(n, p..n)))
        }
        IsotropyKind::SpComplex => {
            let n = single_summand(g, &name, Family::Sp)?;
            let zero = CMat::zeros(n);
            let first = su_raw(n).iter().map(|a| sp_element(a, &zero).encode()).collect();
            (first, vec![sp_element(&complex_scalar(n), &zero).encode()])
        }
        IsotropyKind::Torus => {
            let mut per_summand = Vec::new();
            for (idx, s) in g.summands().iter().enumerate() {
                match s.kind {
                    Some((Family::Su, n)) => {
                        per_summand.push(coords_of(g, idx, &encode_all(&su_diagonal_raw(n)))?)
                    }
                    _ => return Err(bad_params()),
                }
            }
            let mut iter = per_summand.into_iter();
            let first = iter.next().unwrap_or_default();
            let second: Vec<_> = iter.flatten().collect();
            let mut h = first.clone();
            h.extend(second.iter().cloned());
            return Ok(IsotropyGenerators { h, first, second });
        }
    };
    let first = coords_of(g, 0, &first)?;
    let second = coords_of(g, 0, &second)?;
    let mut h = first.clone();
    h.extend(second.iter().cloned());
    Ok(IsotropyGenerators { h, first, second })
}

/// Generators of the diagonal torus of a simple `su(n)`.
pub fn diagonal_torus(g: &LieAlgebra) -> Result<Vec<DVector<f64>>> {
    let n = single_summand(g, "diagonal-torus", Family::Su)?;
    coords_of(g, 0, &encode_all(&su_diagonal_raw(n)))
}

/// Generators of the real form `so(n) ⊂ su(n)` (matrices with zero
/// imaginary part).
pub fn real_points(g: &LieAlgebra) -> Result<Vec<DVector<f64>>> {
    let n = single_summand(g, "real-points", Family::Su)?;
    let mats: Vec<_> = so_raw(n).into_iter().map(|m| CMat { re: m, im: DMatrix::zeros(n, n) }.encode()).collect();
    coords_of(g, 0, &mats)
}
