//! Koszul filtrations, Gröbner flags, Conca generators, the Fitzgerald
//! condition and minimal reductions, with certificate verifiers.
//!
//! Every ideal here is generated by linear forms and is stored as the
//! reduced row echelon basis of its degree-one part, so equality of such
//! ideals is equality of matrices.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::arith::{Polynomial, PrimeField};
use crate::error::{Error, Result};
use crate::groebner::{colon_ideal, GroebnerBasis};
use crate::linalg::{pivots, rref, Echelon};
use crate::quotient::QuotientRing;

/// Default cap on enumerated subspaces.
pub const DEFAULT_SUBSPACE_BUDGET: usize = 5000;

/// An ideal generated by linear forms, given by an echelon basis of its
/// degree-one part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearIdeal {
    n: usize,
    basis: Vec<Vec<u32>>,
}

impl LinearIdeal {
    pub fn new(field: PrimeField, n: usize, rows: &[Vec<u32>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("form has {} coefficients, expected {n}", r.len())));
        }
        let rows: Vec<Vec<u32>> = rows.iter().map(|r| r.iter().map(|&c| c % field.p()).collect()).collect();
        Ok(LinearIdeal { n, basis: rref(field, &rows) })
    }

    pub fn zero(n: usize) -> Self {
        LinearIdeal { n, basis: Vec::new() }
    }

    pub fn maximal(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1;
                r
            })
            .collect();
        LinearIdeal { n, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn contains_form(&self, field: PrimeField, v: &[u32]) -> bool {
        let mut e = Echelon::new(field, self.n);
        for r in &self.basis {
            e.insert(r);
        }
        e.contains(v)
    }

    pub fn is_subspace_of(&self, field: PrimeField, other: &LinearIdeal) -> bool {
        self.basis.iter().all(|r| other.contains_form(field, r))
    }

    pub fn forms(&self, ring: &QuotientRing) -> Vec<Polynomial> {
        self.basis.iter().map(|r| ring.linear_form(r)).collect()
    }

    /// The ideal generated in `ring`, as a Gröbner basis of its preimage.
    pub fn groebner(&self, ring: &QuotientRing) -> GroebnerBasis {
        ring.ideal(&self.forms(ring))
    }
}

fn same_ideal(a: &GroebnerBasis, b: &GroebnerBasis) -> bool {
    a.contains_ideal(b) && b.contains_ideal(a)
}

/// The degree-one part of an ideal given by a Gröbner basis, and whether it
/// generates the ideal.
fn linear_part_of(ring: &QuotientRing, gb: &GroebnerBasis) -> (LinearIdeal, bool) {
    let n = ring.nvars();
    if gb.is_unit_ideal() {
        return (LinearIdeal::maximal(n), false);
    }
    let rows: Vec<Vec<u32>> = gb
        .generators()
        .iter()
        .filter(|g| g.degree() == Some(1))
        .map(|g| g.linear_coefficients())
        .collect();
    let lin = LinearIdeal::new(ring.field(), n, &rows).expect("rows have n entries");
    let generated = same_ideal(gb, &lin.groebner(ring));
    (lin, generated)
}

/// Whether a matrix is already in reduced row echelon form with entries in `[0, p)`.
fn is_rref(field: PrimeField, rows: &[Vec<u32>]) -> bool {
    rows.iter().all(|r| r.iter().all(|&c| c < field.p())) && rref(field, rows) == rows
}

// ---------------------------------------------------------------------------
// Koszul filtrations

/// A Koszul filtration certificate.
///
/// `witnesses` holds index triples `[member, base, colon]`: the member `I`
/// is `J + (g)` for the base member `J` and a form `g`, and `J : I` is the
/// colon member. The form `g` is not stored; any form of `I` outside `J`
/// serves. `chain` optionally lists members forming a flag `(0) = I_0 ⊂ I_1 ⊂ ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationCertificate {
    pub members: Vec<Vec<Vec<u32>>>,
    pub witnesses: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub member: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationVerdict {
    pub valid: bool,
    pub members: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Failure>,
}

impl FiltrationCertificate {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedCertificate(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    fn member_ideals(&self, ring: &QuotientRing) -> Result<Vec<LinearIdeal>> {
        let field = ring.field();
        let n = ring.nvars();
        let mut seen = HashMap::new();
        let mut out = Vec::with_capacity(self.members.len());
        for (k, rows) in self.members.iter().enumerate() {
            if rows.iter().any(|r| r.len() != n) {
                return Err(Error::MalformedCertificate(format!("member {k}: rows must have {n} entries")));
            }
            if !is_rref(field, rows) {
                return Err(Error::MalformedCertificate(format!("member {k} is not in reduced echelon form")));
            }
            let ideal = LinearIdeal { n, basis: rows.clone() };
            if let Some(prev) = seen.insert(ideal.clone(), k) {
                return Err(Error::MalformedCertificate(format!("members {prev} and {k} coincide")));
            }
            out.push(ideal);
        }
        for [a, b, c] in &self.witnesses {
            if [a, b, c].iter().any(|&&x| x >= out.len()) {
                return Err(Error::MalformedCertificate(format!("witness [{a}, {b}, {c}] references a missing member")));
            }
        }
        Ok(out)
    }

    /// The verified chain of ideals, if the certificate carries one.
    pub fn chain(&self, ring: &QuotientRing) -> Result<Chain> {
        let verdict = verify_koszul_filtration(ring, self)?;
        if !verdict.valid {
            return Err(Error::Precondition(format!("filtration is not valid: {:?}", verdict.failure)));
        }
        let members = self.member_ideals(ring)?;
        let Some(idx) = &self.chain else {
            return Err(Error::Precondition("certificate has no chain".into()));
        };
        let field = ring.field();
        let mut forms = Vec::new();
        for (step, &k) in idx.iter().enumerate() {
            let m = members.get(k).ok_or_else(|| Error::MalformedCertificate(format!("chain index {k}")))?;
            if m.dim() != step {
                return Err(Error::MalformedCertificate(format!("chain member {k} has dimension {}, expected {step}", m.dim())));
            }
            if step > 0 {
                let prev = &members[idx[step - 1]];
                if !prev.is_subspace_of(field, m) {
                    return Err(Error::MalformedCertificate(format!("chain member {k} does not contain its predecessor")));
                }
                forms.push(m.basis.iter().find(|r| !prev.contains_form(field, r)).unwrap().clone());
            }
        }
        Ok(Chain { forms })
    }
}

/// Checks the filtration axioms: `(0)` and `m` are members and every
/// nonzero member `I` has a witness `I = J + (g)` with `J : I` a member.
pub fn verify_koszul_filtration(ring: &QuotientRing, cert: &FiltrationCertificate) -> Result<FiltrationVerdict> {
    let members = cert.member_ideals(ring)?;
    let n = ring.nvars();
    let field = ring.field();
    let fail = |member: usize, reason: String| FiltrationVerdict {
        valid: false,
        members: members.len(),
        failure: Some(Failure { member, reason }),
    };
    if !members.iter().any(|m| m.dim() == 0) {
        return Ok(fail(0, "(0) is not a member".into()));
    }
    if !members.iter().any(|m| m.dim() == n) {
        return Ok(fail(0, "the maximal ideal is not a member".into()));
    }
    let mut by_member: HashMap<usize, [usize; 3]> = HashMap::new();
    for w in &cert.witnesses {
        if by_member.insert(w[0], *w).is_some() {
            return Err(Error::MalformedCertificate(format!("member {} has two witnesses", w[0])));
        }
    }
    for (k, ideal) in members.iter().enumerate() {
        if ideal.dim() == 0 {
            continue;
        }
        let Some(&[_, base, target]) = by_member.get(&k) else {
            return Ok(fail(k, "no witness".into()));
        };
        let j = &members[base];
        if !j.is_subspace_of(field, ideal) || j.dim() + 1 != ideal.dim() {
            return Ok(fail(k, format!("member {base} is not a hyperplane of member {k}")));
        }
        let colon = colon_ideal(ring, &j.forms(ring), &ideal.forms(ring))?;
        if !same_ideal(&colon, &members[target].groebner(ring)) {
            let shown: Vec<String> = colon.generators().iter().map(|g| g.to_string()).collect();
            return Ok(fail(k, format!("colon by member {base} is ({}), not member {target}", shown.join(", "))));
        }
    }
    Ok(FiltrationVerdict { valid: true, members: members.len(), failure: None })
}

/// Builds a certificate for a family of members, choosing for each member
/// the first hyperplane member whose colon lies in the family.
fn certify_family(ring: &QuotientRing, members: Vec<LinearIdeal>, violation: bool) -> Result<FiltrationCertificate> {
    let field = ring.field();
    let index: HashMap<&LinearIdeal, usize> = members.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut witnesses = Vec::new();
    for (k, ideal) in members.iter().enumerate() {
        if ideal.dim() == 0 {
            continue;
        }
        let mut found = None;
        let mut last_colon = String::new();
        for (b, j) in members.iter().enumerate() {
            if j.dim() + 1 != ideal.dim() || !j.is_subspace_of(field, ideal) {
                continue;
            }
            let colon = colon_ideal(ring, &j.forms(ring), &ideal.forms(ring))?;
            let (lin, generated) = linear_part_of(ring, &colon);
            if generated {
                if let Some(&t) = index.get(&lin) {
                    found = Some([k, b, t]);
                    break;
                }
            }
            last_colon = colon.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ");
        }
        match found {
            Some(w) => witnesses.push(w),
            None if violation => {
                return Err(Error::TheoremViolation(format!(
                    "colon ({last_colon}) at member {k} is not generated by linear forms"
                )))
            }
            None => return Err(Error::Precondition(format!("member {k} has no colon inside the family"))),
        }
    }
    let cert = FiltrationCertificate { members: members.iter().map(|m| m.basis.clone()).collect(), witnesses, chain: None };
    let v = verify_koszul_filtration(ring, &cert)?;
    if !v.valid {
        return Err(Error::TheoremViolation(format!("constructed filtration fails verification: {:?}", v.failure)));
    }
    Ok(cert)
}

/// The ideals generated by subsets of the variables, when they form a
/// Koszul filtration. The chain `(x_1) ⊂ (x_1, x_2) ⊂ ...` is recorded.
pub fn subsets_filtration(ring: &QuotientRing) -> Result<FiltrationCertificate> {
    let n = ring.nvars();
    if n > 12 {
        return Err(Error::BudgetExceeded(format!("2^{n} subsets")));
    }
    let mut members: Vec<(usize, u32, LinearIdeal)> = (0u32..1 << n)
        .map(|mask| {
            let rows = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| {
                    let mut r = vec![0; n];
                    r[i] = 1;
                    r
                })
                .collect::<Vec<_>>();
            (rows.len(), mask.reverse_bits(), LinearIdeal { n, basis: rows })
        })
        .collect();
    members.sort();
    let members: Vec<LinearIdeal> = members.into_iter().map(|t| t.2).collect();
    let mut cert = certify_family(ring, members, false)?;
    let chain: Vec<usize> = (0..=n)
        .map(|k| {
            let want: Vec<Vec<u32>> = LinearIdeal::maximal(n).basis[..k].to_vec();
            cert.members.iter().position(|m| *m == want).unwrap()
        })
        .collect();
    cert.chain = Some(chain);
    Ok(cert)
}

/// Number of subspaces of `F_p^n`, saturating.
pub fn subspace_count(p: u64, n: usize) -> u64 {
    (0..=n).fold(0u64, |acc, k| acc.saturating_add(gaussian_binomial(p, n, k)))
}

fn gaussian_binomial(p: u64, n: usize, k: usize) -> u64 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(p.pow((n - i) as u32) as u128 - 1);
        den = den.saturating_mul(p.pow((i + 1) as u32) as u128 - 1);
        if num > u64::MAX as u128 * 1_000_000 {
            return u64::MAX;
        }
    }
    u64::try_from(num / den).unwrap_or(u64::MAX)
}

/// All subspaces of `F_p^n` in reduced echelon form, by dimension, then
/// pivot set, then entries.
pub fn all_subspaces(field: PrimeField, n: usize) -> Vec<LinearIdeal> {
    let p = field.p();
    let mut out = Vec::new();
    for k in 0..=n {
        for piv in combinations(n, k) {
            // free entries: row r, columns c > piv[r] not in piv
            let slots: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| ((piv[r] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (r, c)))
                .collect();
            let mut vals = vec![0u32; slots.len()];
            loop {
                let mut rows = vec![vec![0u32; n]; k];
                for (r, &c) in piv.iter().enumerate() {
                    rows[r][c] = 1;
                }
                for (&(r, c), &v) in slots.iter().zip(&vals) {
                    rows[r][c] = v;
                }
                out.push(LinearIdeal { n, basis: rows });
                // odometer
                let mut i = 0;
                while i < vals.len() && vals[i] == p - 1 {
                    vals[i] = 0;
                    i += 1;
                }
                if i == vals.len() {
                    break;
                }
                vals[i] += 1;
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Every ideal generated by linear forms, as a Koszul filtration of a ring
/// satisfying the Fitzgerald condition. The witness for `I = (l_1..l_i)`
/// in echelon form drops the last row.
pub fn all_linear_ideals_filtration(ring: &QuotientRing, budget: usize) -> Result<FiltrationCertificate> {
    let n = ring.nvars();
    let count = subspace_count(ring.p() as u64, n);
    if count > budget as u64 {
        return Err(Error::BudgetExceeded(format!("{count} subspaces exceed the budget {budget}")));
    }
    let fitz = check_fitzgerald(ring, budget)?;
    if !fitz.holds {
        return Err(Error::Precondition(format!("the Fitzgerald condition fails at {:?}", fitz.witness)));
    }
    let field = ring.field();
    let members = all_subspaces(field, n);
    let index: HashMap<&LinearIdeal, usize> = members.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut witnesses = Vec::new();
    for (k, ideal) in members.iter().enumerate() {
        if ideal.dim() == 0 {
            continue;
        }
        let j = LinearIdeal { n, basis: ideal.basis[..ideal.dim() - 1].to_vec() };
        let colon = colon_ideal(ring, &j.forms(ring), &ideal.forms(ring))?;
        let (lin, generated) = linear_part_of(ring, &colon);
        if !generated {
            let shown = colon.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ");
            return Err(Error::TheoremViolation(format!("colon ({shown}) at member {k} is not generated by linear forms")));
        }
        witnesses.push([k, index[&j], index[&lin]]);
    }
    let cert = FiltrationCertificate { members: members.iter().map(|m| m.basis.clone()).collect(), witnesses, chain: None };
    let v = verify_koszul_filtration(ring, &cert)?;
    if !v.valid {
        return Err(Error::TheoremViolation(format!("constructed filtration fails verification: {:?}", v.failure)));
    }
    Ok(cert)
}

// ---------------------------------------------------------------------------
// Gröbner flags

/// A complete flag `l_1, ..., l_n` of linear forms with the asserted colon
/// indices: `(l_1..l_{i-1}) : l_i = (l_1..l_{j_i})`, where `j_i = 0` means
/// the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagCertificate {
    pub forms: Vec<Vec<u32>>,
    pub colons: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagVerdict {
    pub valid: bool,
    /// 1-based index of the first failing colon
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed: Option<Vec<String>>,
}

impl FlagCertificate {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedCertificate(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    /// The verified chain of prefix ideals.
    pub fn chain(&self, ring: &QuotientRing) -> Result<Chain> {
        let v = verify_groebner_flag(ring, self)?;
        if !v.valid {
            return Err(Error::Precondition(format!("flag fails at index {:?}", v.index)));
        }
        Ok(Chain { forms: self.forms.clone() })
    }
}

/// A verified chain `(0) ⊂ (l_1) ⊂ (l_1, l_2) ⊂ ...` taken from a valid
/// flag or filtration certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    forms: Vec<Vec<u32>>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Generators of `I_r = (l_1, ..., l_r)`.
    pub fn ideal(&self, ring: &QuotientRing, r: usize) -> Result<Vec<Polynomial>> {
        if r > self.forms.len() {
            return Err(Error::InvalidArgument(format!("chain has {} steps, asked for {r}", self.forms.len())));
        }
        Ok(self.forms[..r].iter().map(|f| ring.linear_form(f)).collect())
    }
}

/// The colon `(l_1..l_{i-1}) : l_i`.
fn prefix_colon(ring: &QuotientRing, forms: &[Vec<u32>], i: usize) -> Result<GroebnerBasis> {
    let prefix: Vec<Polynomial> = forms[..i - 1].iter().map(|f| ring.linear_form(f)).collect();
    colon_ideal(ring, &prefix, &[ring.linear_form(&forms[i - 1])])
}

fn check_flag_forms(ring: &QuotientRing, forms: &[Vec<u32>]) -> Result<()> {
    let n = ring.nvars();
    if forms.len() != n || forms.iter().any(|f| f.len() != n) {
        return Err(Error::MalformedCertificate(format!("a flag needs {n} forms with {n} coefficients")));
    }
    if forms.iter().flatten().any(|&c| c >= ring.p()) {
        return Err(Error::MalformedCertificate("coefficients must lie in [0, p)".into()));
    }
    let mut e = Echelon::new(ring.field(), n);
    if !forms.iter().all(|f| e.insert(f)) {
        return Err(Error::MalformedCertificate("flag forms are linearly dependent".into()));
    }
    Ok(())
}

/// Computes each colon and compares it with the asserted prefix ideal.
pub fn verify_groebner_flag(ring: &QuotientRing, flag: &FlagCertificate) -> Result<FlagVerdict> {
    check_flag_forms(ring, &flag.forms)?;
    let n = ring.nvars();
    if flag.colons.len() != n || flag.colons.iter().any(|&j| j > n) {
        return Err(Error::MalformedCertificate(format!("need {n} colon indices in 0..={n}")));
    }
    for i in 1..=n {
        let colon = prefix_colon(ring, &flag.forms, i)?;
        let j = flag.colons[i - 1];
        let asserted = ring.ideal(&flag.forms[..j].iter().map(|f| ring.linear_form(f)).collect::<Vec<_>>());
        if !same_ideal(&colon, &asserted) {
            return Ok(FlagVerdict {
                valid: false,
                index: Some(i),
                computed: Some(colon.generators().iter().map(|g| g.to_string()).collect()),
            });
        }
    }
    Ok(FlagVerdict { valid: true, index: None, computed: None })
}

/// The index `j` with `colon = (l_1..l_j)`, if there is one.
fn colon_index(ring: &QuotientRing, forms: &[Vec<u32>], colon: &GroebnerBasis) -> Option<usize> {
    let (lin, generated) = linear_part_of(ring, colon);
    if !generated {
        return None;
    }
    let j = lin.dim();
    let prefix = LinearIdeal::new(ring.field(), ring.nvars(), &forms[..j]).ok()?;
    (prefix == lin).then_some(j)
}

/// Colon indices of a complete flag, or `None` at the first colon that is
/// not a prefix ideal.
pub fn flag_colons(ring: &QuotientRing, forms: &[Vec<u32>]) -> Result<Option<Vec<usize>>> {
    check_flag_forms(ring, forms)?;
    let mut out = Vec::new();
    for i in 1..=forms.len() {
        let colon = prefix_colon(ring, forms, i)?;
        match colon_index(ring, forms, &colon) {
            Some(j) => out.push(j),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagSearch {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<FlagCertificate>,
    /// partial flags visited
    pub nodes: usize,
    /// complete flags reached
    pub complete: usize,
    pub exhausted: bool,
}

/// Representatives of the nonzero vectors modulo a subspace with the given
/// echelon pivots, up to scalars: zero on the pivots, first nonzero entry one.
fn complement_reps(p: u32, n: usize, pivots: &[usize]) -> Vec<Vec<u32>> {
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for t in 0..free.len() {
        let rest = &free[t + 1..];
        let mut vals = vec![0u32; rest.len()];
        loop {
            let mut v = vec![0u32; n];
            v[free[t]] = 1;
            for (&c, &x) in rest.iter().zip(&vals) {
                v[c] = x;
            }
            out.push(v);
            let mut i = vals.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if vals[i] < p - 1 {
                    vals[i] += 1;
                    for x in vals.iter_mut().skip(i + 1) {
                        *x = 0;
                    }
                    i = usize::MAX;
                    break;
                }
            }
            if i != usize::MAX {
                break;
            }
        }
    }
    out
}

/// Backtracking search for a Gröbner flag over the ring's own prime field.
/// Each partial flag is one node against `budget`.
pub fn search_groebner_flag(ring: &QuotientRing, budget: usize) -> Result<FlagSearch> {
    search_with_prefix(ring, &[], budget)
}

fn search_with_prefix(ring: &QuotientRing, prefix: &[Vec<u32>], budget: usize) -> Result<FlagSearch> {
    let n = ring.nvars();
    if n > 4 || ring.p() > 5 {
        return Err(Error::Precondition(format!("flag search needs n <= 4 and p <= 5, got n = {n}, p = {}", ring.p())));
    }
    let mut st = SearchState { ring, budget, nodes: 0, complete: 0, forms: Vec::new(), colons: Vec::new(), pending: Vec::new() };
    for f in prefix {
        st.nodes += 1;
        if !st.push(f.clone())? {
            return Ok(FlagSearch { flag: None, nodes: st.nodes, complete: 0, exhausted: true });
        }
    }
    let flag = st.extend()?;
    Ok(FlagSearch { flag, nodes: st.nodes, complete: st.complete, exhausted: true })
}

struct SearchState<'a> {
    ring: &'a QuotientRing,
    budget: usize,
    nodes: usize,
    complete: usize,
    forms: Vec<Vec<u32>>,
    colons: Vec<usize>,
    /// colons that must equal a later prefix: (dimension, subspace)
    pending: Vec<(usize, LinearIdeal)>,
}

impl SearchState<'_> {
    /// Appends a form; returns whether the partial flag is still consistent.
    /// On `false` the state is left unchanged.
    fn push(&mut self, f: Vec<u32>) -> Result<bool> {
        let field = self.ring.field();
        let n = self.ring.nvars();
        self.forms.push(f);
        let i = self.forms.len();
        let span = LinearIdeal::new(field, n, &self.forms)?;
        let prev = LinearIdeal::new(field, n, &self.forms[..i - 1])?;
        let colon = prefix_colon(self.ring, &self.forms, i)?;
        let (lin, generated) = linear_part_of(self.ring, &colon);
        let j = lin.dim();
        let colon_ok = generated
            && match j.cmp(&i) {
                std::cmp::Ordering::Less => lin == prev,
                std::cmp::Ordering::Equal => lin == span,
                std::cmp::Ordering::Greater => span.is_subspace_of(field, &lin),
            };
        let pending_ok = self.pending.iter().all(|(k, s)| match k.cmp(&i) {
            std::cmp::Ordering::Equal => *s == span,
            std::cmp::Ordering::Greater => span.is_subspace_of(field, s),
            std::cmp::Ordering::Less => true,
        });
        if !(colon_ok && pending_ok) {
            self.forms.pop();
            return Ok(false);
        }
        self.colons.push(j);
        if j > i {
            self.pending.push((j, lin));
        }
        Ok(true)
    }

    fn pop(&mut self) {
        let i = self.forms.len();
        self.forms.pop();
        if let Some(j) = self.colons.pop() {
            if j > i {
                self.pending.pop();
            }
        }
    }

    fn extend(&mut self) -> Result<Option<FlagCertificate>> {
        let n = self.ring.nvars();
        if self.forms.len() == n {
            self.complete += 1;
            return Ok(Some(FlagCertificate { forms: self.forms.clone(), colons: self.colons.clone() }));
        }
        let basis = rref(self.ring.field(), &self.forms);
        let piv = pivots(&basis);
        for f in complement_reps(self.ring.p(), n, &piv) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(format!("flag search visited {} nodes", self.nodes - 1)));
            }
            if self.push(f)? {
                if let Some(found) = self.extend()? {
                    return Ok(Some(found));
                }
                self.pop();
            }
        }
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// Conca generators and the Fitzgerald condition

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed: Option<String>,
}

impl Check {
    fn yes() -> Self {
        Check { holds: true, failed: None }
    }

    fn no(why: impl Into<String>) -> Self {
        Check { holds: false, failed: Some(why.into()) }
    }
}

/// Dimension of the span of `reduce(f * x_v)` in `R_{d+1}` over the given
/// forms `f` of degree `d` and all variables.
fn product_span_dim(ring: &QuotientRing, fs: &[Polynomial], d: usize) -> usize {
    let tables = ring.tables(d + 1);
    let mut e = Echelon::new(ring.field(), tables.dim(d as i32 + 1));
    for f in fs {
        for v in 0..ring.nvars() {
            let g = ring.reduce(&f.mul_unchecked(&ring.var(v)));
            e.insert(&tables.coords(&g, d as i32 + 1));
        }
    }
    e.dim()
}

/// `x != 0`, `x^2 = 0` and `x R_1 = R_2`; on success also checks the
/// consequences `m^3 = 0` and `x ∉ m^2`.
pub fn check_conca_generator(ring: &QuotientRing, x: &[u32]) -> Result<Check> {
    let n = ring.nvars();
    if x.len() != n {
        return Err(Error::InvalidArgument(format!("form needs {n} coefficients")));
    }
    let l = ring.reduce(&ring.linear_form(x));
    if l.is_zero() {
        return Ok(Check::no("x = 0"));
    }
    let sq = ring.reduce(&l.mul_unchecked(&l));
    if !sq.is_zero() {
        return Ok(Check::no(format!("x^2 = {sq} is not zero")));
    }
    if product_span_dim(ring, std::slice::from_ref(&l), 1) != ring.dim(2) {
        return Ok(Check::no("x R_1 is a proper subspace of R_2"));
    }
    if ring.dim(3) != 0 {
        return Err(Error::TheoremViolation("Conca generator but m^3 is not zero".into()));
    }
    if l.degree() != Some(1) {
        return Err(Error::TheoremViolation("Conca generator lies in m^2".into()));
    }
    Ok(Check::yes())
}

/// Completes `x` by the standard basis vectors outside its span.
fn standard_completion(field: PrimeField, n: usize, start: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut e = Echelon::new(field, n);
    let mut out = Vec::new();
    for f in start {
        if e.insert(f) {
            out.push(f.clone());
        }
    }
    for i in 0..n {
        let mut v = vec![0; n];
        v[i] = 1;
        if e.insert(&v) {
            out.push(v);
        }
    }
    out
}

/// A Gröbner flag starting with a Conca generator `x`. The standard
/// completion is tried first, then a search over completions within budget.
pub fn conca_flag(ring: &QuotientRing, x: &[u32], budget: usize) -> Result<FlagCertificate> {
    let c = check_conca_generator(ring, x)?;
    if !c.holds {
        return Err(Error::Precondition(format!("not a Conca generator: {}", c.failed.unwrap())));
    }
    let x: Vec<u32> = x.iter().map(|&a| a % ring.p()).collect();
    let forms = standard_completion(ring.field(), ring.nvars(), std::slice::from_ref(&x));
    if let Some(colons) = flag_colons(ring, &forms)? {
        let flag = FlagCertificate { forms: forms.clone(), colons };
        if verify_groebner_flag(ring, &flag)?.valid {
            return Ok(flag);
        }
    }
    if ring.nvars() <= 4 && ring.p() <= 5 {
        if let Some(flag) = search_with_prefix(ring, &[x], budget)?.flag {
            if verify_groebner_flag(ring, &flag)?.valid {
                return Ok(flag);
            }
        }
    }
    Err(Error::TheoremViolation(format!("no Gröbner flag found starting with the Conca generator; tried {forms:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitzgeraldCheck {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub forms_checked: usize,
}

/// For every nonzero linear form `l` up to scalars: `R_2 ⊆ ann(l)` and
/// `ann(l)_1 R_1 = R_2`, the graded form of `ann(x) m = m^2`.
pub fn check_fitzgerald(ring: &QuotientRing, budget: usize) -> Result<FitzgeraldCheck> {
    let n = ring.nvars();
    let p = ring.p() as u64;
    let count = if n == 0 { 0 } else { (p.saturating_pow(n as u32) - 1) / (p - 1) };
    if count > budget as u64 {
        return Err(Error::BudgetExceeded(format!("{count} linear forms exceed the budget {budget}")));
    }
    let r2 = ring.graded_piece_basis(2);
    let mut checked = 0;
    for l in complement_reps(ring.p(), n, &[]) {
        checked += 1;
        let colon = colon_ideal(ring, &[], &[ring.linear_form(&l)])?;
        let fail = |why: String| FitzgeraldCheck { holds: false, witness: Some(l.clone()), reason: Some(why), forms_checked: checked };
        if let Some(b) = r2.iter().find(|b| !colon.contains(&Polynomial::monomial(ring.poly_ring(), 1, (*b).clone()))) {
            return Ok(fail(format!("{} is not annihilated", b.fmt_with(ring.names()))));
        }
        let ann1: Vec<Polynomial> = colon.generators().iter().filter(|g| g.degree() == Some(1)).cloned().collect();
        if product_span_dim(ring, &ann1, 1) != r2.len() {
            return Ok(fail("ann(l)_1 R_1 is a proper subspace of R_2".into()));
        }
    }
    Ok(FitzgeraldCheck { holds: true, witness: None, reason: None, forms_checked: checked })
}

// ---------------------------------------------------------------------------
// minimal reductions

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    /// `J R_d = R_{d+1}` for `1 <= d <= d_stab`
    pub reduction: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_degree: Option<usize>,
    /// `H_{R/J}(t) = H_R(t) (1-t)^{dim J}`
    pub regular_sequence: bool,
    pub multiplicity: i64,
    pub codim: usize,
    pub minimal_multiplicity: bool,
}

pub fn check_reduction(ring: &std::sync::Arc<QuotientRing>, j: &LinearIdeal, d_stab: usize) -> Result<ReductionCheck> {
    if j.nvars() != ring.nvars() {
        return Err(Error::VariableCountMismatch(j.nvars(), ring.nvars()));
    }
    let forms = j.forms(ring);
    let mut failing = None;
    for d in 1..=d_stab {
        let tables = ring.tables(d + 1);
        let mut e = Echelon::new(ring.field(), tables.dim(d as i32 + 1));
        for l in &forms {
            for b in tables.basis(d) {
                let g = ring.reduce(&l.mul_monomial(1, b));
                e.insert(&tables.coords(&g, d as i32 + 1));
            }
        }
        if e.dim() != tables.dim(d as i32 + 1) {
            failing = Some(d);
            break;
        }
    }
    let h = ring.hilbert_series(0);
    let (q, _) = ring.quotient_by(&forms)?;
    let hq = q.hilbert_series(0);
    let regular = hq.numerator == h.numerator;
    Ok(ReductionCheck {
        reduction: failing.is_none(),
        failing_degree: failing,
        regular_sequence: regular,
        multiplicity: h.multiplicity,
        codim: h.codim,
        minimal_multiplicity: h.multiplicity == h.codim as i64 + 1,
    })
}

/// The flag `a_1..a_d, b_{d+1}..b_n` from a minimal reduction `J = (a)`:
/// the `a`-colons are the preceding prefixes and the `b`-colons are `m`.
pub fn minimal_multiplicity_flag(ring: &std::sync::Arc<QuotientRing>, j: &LinearIdeal, d_stab: usize) -> Result<FlagCertificate> {
    let c = check_reduction(ring, j, d_stab)?;
    if !c.reduction || !c.regular_sequence {
        return Err(Error::Precondition(format!(
            "J is not a regular minimal reduction (reduction: {}, regular sequence: {})",
            c.reduction, c.regular_sequence
        )));
    }
    let n = ring.nvars();
    let forms = standard_completion(ring.field(), n, j.basis());
    let colons: Vec<usize> = (1..=n).map(|i| if i <= j.dim() { i - 1 } else { n }).collect();
    let flag = FlagCertificate { forms, colons };
    let v = verify_groebner_flag(ring, &flag)?;
    if !v.valid {
        return Err(Error::TheoremViolation(format!(
            "reduction flag fails at index {}: colon ({})",
            v.index.unwrap(),
            v.computed.unwrap().join(", ")
        )));
    }
    Ok(flag)
}
