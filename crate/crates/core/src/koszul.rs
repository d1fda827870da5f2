//! Koszulness verdicts: the diagonal Betti test, acyclicity of the linear
//! part, the Poincaré–Hilbert identity, and the change-of-rings
//! factorization along a flag.
//!
//! All verdicts are bounded: "yes" means nothing contradicts Koszulness
//! in homological degrees `<= i_max` and internal degrees `<= d_max`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::Chain;
use crate::quotient::{series_over_one_minus_t, GradedModule};
use crate::resolution::{betti_table, linear_part, resolve, BettiJson, BettiTable, Bounds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BettiDiagonal,
    LinearPart,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "betti-diagonal" | "betti" => Ok(Method::BettiDiagonal),
            "linear-part" | "linpart" => Ok(Method::LinearPart),
            _ => Err(Error::InvalidArgument(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KoszulVerdict {
    pub verdict: Verdict,
    pub method: Method,
    pub bounds: Bounds,
    /// `(i, j)` of an off-diagonal Betti number, or of nonzero homology of
    /// the linear part, in the module's own grading
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, i32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<BettiJson>,
}

/// The single generation degree, `None` for the zero module.
fn generation_degree(module: &GradedModule) -> Result<Option<i32>> {
    match module.generation_degrees().as_slice() {
        [] => Ok(None),
        [g] => Ok(Some(*g)),
        many => Err(Error::MixedGeneration(many.to_vec())),
    }
}

pub fn koszul_verdict(module: &GradedModule, i_max: usize, d_max: i32, method: Method) -> Result<KoszulVerdict> {
    let bounds = Bounds { imax: i_max, dmax: d_max };
    let done = |verdict, witness, tables| Ok(KoszulVerdict { verdict, method, bounds, witness, tables });
    let Some(g) = generation_degree(module)? else {
        return done(Verdict::Yes, None, None);
    };
    let min_i = if method == Method::LinearPart { 2 } else { 1 };
    if i_max < min_i || d_max < 1 {
        return done(Verdict::Inconclusive, None, None);
    }
    let m = module.shifted(g)?;
    let res = resolve(&m, i_max, d_max)?;
    let table = betti_table(&res);
    match method {
        Method::BettiDiagonal => {
            let witness = table.off_diagonal(0).first().map(|&(i, j)| (i, j + g));
            let verdict = if witness.is_some() { Verdict::No } else { Verdict::Yes };
            done(verdict, witness, Some(table.to_json()))
        }
        Method::LinearPart => {
            let lin = linear_part(&res)?;
            for i in 1..i_max {
                for d in 0..=d_max {
                    if lin.homology_dims(i, d)? != 0 {
                        return done(Verdict::No, Some((i, d + g)), Some(table.to_json()));
                    }
                }
            }
            done(Verdict::Yes, None, Some(table.to_json()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoincareCheck {
    pub holds: bool,
    pub degree: usize,
    /// total Betti numbers `β_0 .. β_D`
    pub lhs: Vec<i64>,
    /// coefficients of `H_M(-t) / H_R(-t)` up to `t^D`
    pub rhs: Vec<i64>,
    /// first degree where the two sides differ
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fails_at: Option<usize>,
    pub bounds: Bounds,
}

/// Coefficients of `a / b` up to `t^d`, for `b_0 = 1`.
pub fn series_divide(a: &[i64], b: &[i64], d: usize) -> Vec<i64> {
    assert_eq!(b.first(), Some(&1), "divisor must have constant term 1");
    let mut q = vec![0i64; d + 1];
    for k in 0..=d {
        let mut c = a.get(k).copied().unwrap_or(0);
        for i in 1..=k.min(b.len().saturating_sub(1)) {
            c -= b[i] * q[k - i];
        }
        q[k] = c;
    }
    q
}

/// Compares `Σ β_i t^i` with `H_M(-t)/H_R(-t)` up to `t^D`, where `D = i_max`
/// and the Betti numbers come from a resolution bounded by `(D, d_max)`.
pub fn poincare_hilbert_check(module: &GradedModule, i_max: usize, d_max: i32) -> Result<PoincareCheck> {
    let bounds = Bounds { imax: i_max, dmax: d_max };
    let g = generation_degree(module)?;
    let n = module.ring().nvars();
    let alt = |v: Vec<i64>| -> Vec<i64> { v.into_iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c }).collect() };
    let hr = module.ring().hilbert_series(i_max);
    let hr = alt(series_over_one_minus_t(&hr.numerator, n, i_max));
    let (lhs, hm) = match g {
        None => (vec![0; i_max + 1], vec![0; i_max + 1]),
        Some(g) => {
            let m = module.shifted(g)?;
            let t = betti_table(&resolve(&m, i_max.max(1), d_max)?);
            let lhs = t.totals()[..=i_max].iter().map(|&c| c as i64).collect();
            let hm = m.hilbert_series(i_max);
            (lhs, alt(series_over_one_minus_t(&hm.numerator, n, i_max)))
        }
    };
    let rhs = series_divide(&hm, &hr, i_max);
    let fails_at = (0..=i_max).find(|&k| lhs[k] != rhs[k]);
    Ok(PoincareCheck { holds: fails_at.is_none(), degree: i_max, lhs, rhs, fails_at, bounds })
}

/// Coefficient-wise product of two bigraded tables, truncated to bounds.
fn product(a: &BettiTable, b: &BettiTable, bounds: Bounds) -> BTreeMap<(usize, i32), usize> {
    let mut out = BTreeMap::new();
    for (&(i1, j1), &c1) in a.entries() {
        for (&(i2, j2), &c2) in b.entries() {
            if i1 + i2 <= bounds.imax && j1 + j2 <= bounds.dmax {
                *out.entry((i1 + i2, j1 + j2)).or_insert(0) += c1 * c2;
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, i32)>,
    pub bounds: Bounds,
    /// Betti tables of M over R, of M over R/I_r, and of R/I_r over R
    pub over_ring: BettiJson,
    pub over_quotient: BettiJson,
    pub quotient_over_ring: BettiJson,
}

fn annihilated_module_over_quotient(module: &GradedModule, chain: &Chain, r: usize) -> Result<(GradedModule, GradedModule)> {
    let ring = module.ring();
    let ideal = chain.ideal(ring, r)?;
    if !module.is_annihilated_by(&ideal) {
        return Err(Error::Precondition(format!("the module is not annihilated by I_{r}")));
    }
    let (_, map) = ring.quotient_by(&ideal)?;
    let over_q = module.transfer(&map)?;
    let cyclic = GradedModule::cyclic(ring, &ideal)?;
    Ok((over_q, cyclic))
}

/// Checks `P^R_M = P^{R/I_r}_M · P^R_{R/I_r}` coefficient-wise within bounds.
pub fn check_factorization(module: &GradedModule, chain: &Chain, r: usize, i_max: usize, d_max: i32) -> Result<FactorizationCheck> {
    let bounds = Bounds { imax: i_max, dmax: d_max };
    let (over_q, cyclic) = annihilated_module_over_quotient(module, chain, r)?;
    let a = betti_table(&resolve(module, i_max, d_max)?);
    let b = betti_table(&resolve(&over_q, i_max, d_max)?);
    let c = betti_table(&resolve(&cyclic, i_max, d_max)?);
    let prod = product(&b, &c, bounds);
    let mut keys: Vec<(usize, i32)> = a.entries().keys().chain(prod.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    let witness = keys.into_iter().find(|&(i, j)| a.get(i, j) != prod.get(&(i, j)).copied().unwrap_or(0));
    Ok(FactorizationCheck {
        holds: witness.is_none(),
        witness,
        bounds,
        over_ring: a.to_json(),
        over_quotient: b.to_json(),
        quotient_over_ring: c.to_json(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferCheck {
    pub consistent: bool,
    pub over_ring: KoszulVerdict,
    pub over_quotient: KoszulVerdict,
}

/// Koszulness over `R` and over `R/I_r` must agree.
pub fn verdict_transfer_check(module: &GradedModule, chain: &Chain, r: usize, i_max: usize, d_max: i32) -> Result<TransferCheck> {
    let (over_q, _) = annihilated_module_over_quotient(module, chain, r)?;
    let a = koszul_verdict(module, i_max, d_max, Method::BettiDiagonal)?;
    let b = koszul_verdict(&over_q, i_max, d_max, Method::BettiDiagonal)?;
    Ok(TransferCheck { consistent: a.verdict == b.verdict, over_ring: a, over_quotient: b })
}

/// Whether `P_k(t) H_R(-t) = 1` up to `t^D`, the residue-field case of the
/// Poincaré–Hilbert identity.
pub fn residue_field_identity(ring: &Arc<crate::quotient::QuotientRing>, i_max: usize, d_max: i32) -> Result<bool> {
    Ok(poincare_hilbert_check(&GradedModule::residue_field(ring), i_max, d_max)?.holds)
}
