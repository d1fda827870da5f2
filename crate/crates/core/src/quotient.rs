//! Standard graded algebras `R = F_p[x_1..x_n]/I`, graded modules given by
//! presentations, graded pieces and Hilbert series.
//!
//! Quotient arithmetic is normal-form arithmetic against the reduced
//! Gröbner basis of `I`. For linear algebra on graded pieces the ring
//! caches [`GradedTables`]: standard monomial bases of `R_d` and the
//! multiplication-by-variable maps `R_d -> R_{d+1}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::{Monomial, MonomialOrder, PolyRing, Polynomial, PrimeField};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, raw_syzygies, FreeModuleVector, GroebnerBasis, ModuleGroebnerBasis};
use crate::linalg::{rref, Echelon};

/// A standard graded algebra presented by homogeneous relations of degree >= 2.
pub struct QuotientRing {
    poly: Arc<PolyRing>,
    generators: Vec<Polynomial>,
    gb: GroebnerBasis,
    tables: Mutex<Option<Arc<GradedTables>>>,
}

impl std::fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuotientRing")
            .field("p", &self.p())
            .field("vars", &self.poly.names())
            .field("ideal", &self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>())
            .finish()
    }
}

impl Clone for QuotientRing {
    fn clone(&self) -> Self {
        QuotientRing {
            poly: self.poly.clone(),
            generators: self.generators.clone(),
            gb: self.gb.clone(),
            tables: Mutex::new(None),
        }
    }
}

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.gb == other.gb
    }
}

impl QuotientRing {
    /// Builds `F_p[vars]/(gens)` under degrevlex.
    pub fn new(p: u32, vars: Vec<String>, gens: Vec<Polynomial>) -> Result<Self> {
        Self::with_order(p, vars, gens, MonomialOrder::DegRevLex)
    }

    pub fn with_order(p: u32, vars: Vec<String>, gens: Vec<Polynomial>, order: MonomialOrder) -> Result<Self> {
        let poly = PolyRing::new(p, vars, order)?;
        let mut kept = Vec::new();
        for g in gens {
            let g = g.rebase(&poly);
            if g.is_zero() {
                continue;
            }
            if let Some((c, m)) = g.inhomogeneous_term() {
                let term = Polynomial::monomial(&poly, *c, m.clone());
                return Err(Error::NonHomogeneous(format!("generator {} has term {} of another degree", g, term)));
            }
            if g.degree().unwrap() < 2 {
                return Err(Error::LinearGenerator(g.to_string()));
            }
            kept.push(g);
        }
        let gb = buchberger(&poly, &kept);
        Ok(QuotientRing { poly, generators: kept, gb, tables: Mutex::new(None) })
    }

    pub fn p(&self) -> u32 {
        self.poly.p()
    }

    pub fn field(&self) -> PrimeField {
        self.poly.field()
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn names(&self) -> &[String] {
        self.poly.names()
    }

    pub fn poly_ring(&self) -> &Arc<PolyRing> {
        &self.poly
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn defining_gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::var(&self.poly, i)
    }

    pub fn linear_form(&self, coeffs: &[u32]) -> Polynomial {
        Polynomial::linear_form(&self.poly, coeffs)
    }

    /// Canonical representative of `f` modulo the defining ideal.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        self.gb.reduce(&f.rebase(&self.poly))
    }

    /// Gröbner basis of the ideal `(gens) + I` of the ambient ring, i.e. of
    /// the preimage of `(gens)` in `R`.
    pub fn ideal(&self, gens: &[Polynomial]) -> GroebnerBasis {
        let mut all: Vec<Polynomial> = gens.iter().map(|g| g.rebase(&self.poly)).collect();
        all.extend(self.gb.generators().iter().cloned());
        buchberger(&self.poly, &all)
    }

    /// Tables covering at least degrees `0..=d`.
    pub fn tables(&self, d: usize) -> Arc<GradedTables> {
        let mut guard = self.tables.lock().unwrap();
        if let Some(t) = guard.as_ref() {
            if t.max_degree >= d {
                return t.clone();
            }
        }
        let target = guard.as_ref().map_or(d, |t| d.max(t.max_degree * 2).max(d));
        let t = Arc::new(GradedTables::build(&self.poly, &self.gb, target));
        *guard = Some(t.clone());
        t
    }

    /// Standard monomials of degree `d`: a basis of `R_d`.
    pub fn graded_piece_basis(&self, d: i32) -> Vec<Monomial> {
        if d < 0 {
            return Vec::new();
        }
        self.tables(d as usize).basis(d as usize).to_vec()
    }

    pub fn dim(&self, d: i32) -> usize {
        if d < 0 {
            return 0;
        }
        self.tables(d as usize).dim(d)
    }

    pub fn hilbert_series(&self, max_degree: usize) -> HilbertSeries {
        let lts = self.gb.leading_monomials();
        HilbertSeries::from_numerator(hilbert_numerator(&lts, self.nvars()), self.nvars(), max_degree)
    }

    /// `R/(gens)` as a new presentation. Linear generators are eliminated
    /// by solving for pivot variables, so the result again has relations of
    /// degree >= 2 only. Also returns the quotient map.
    pub fn quotient_by(self: &Arc<Self>, gens: &[Polynomial]) -> Result<(Arc<QuotientRing>, RingMap)> {
        let field = self.field();
        let n = self.nvars();
        let mut linear = Vec::new();
        let mut higher = Vec::new();
        for g in gens {
            let g = self.reduce(g);
            if g.is_zero() {
                continue;
            }
            if !g.is_homogeneous() {
                return Err(Error::NonHomogeneous(g.to_string()));
            }
            match g.degree().unwrap() {
                0 => return Err(Error::InvalidArgument("unit ideal has no standard graded quotient".into())),
                1 => linear.push(g.linear_coefficients()),
                _ => higher.push(g),
            }
        }
        let rows = rref(field, &linear);
        let pivots: Vec<usize> = rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
        let kept: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let names: Vec<String> = kept.iter().map(|&i| self.names()[i].clone()).collect();
        let target_poly = PolyRing::new(self.p(), names.clone(), self.poly.order())?;
        let mut images = vec![Polynomial::zero(&target_poly); n];
        for (new, &old) in kept.iter().enumerate() {
            images[old] = Polynomial::var(&target_poly, new);
        }
        for (row, &piv) in rows.iter().zip(&pivots) {
            // x_piv = - sum_{j kept} row_j x_j
            let coeffs: Vec<u32> = kept.iter().map(|&j| field.neg(row[j])).collect();
            images[piv] = Polynomial::linear_form(&target_poly, &coeffs);
        }
        let mut new_gens: Vec<Polynomial> = Vec::new();
        for g in self.generators.iter().chain(&higher) {
            let s = g.substitute(&target_poly, &images);
            if !s.is_zero() {
                new_gens.push(s);
            }
        }
        let target = Arc::new(QuotientRing::with_order(self.p(), names, new_gens, self.poly.order())?);
        let map = RingMap { source: self.clone(), target: target.clone(), images };
        Ok((target, map))
    }

    /// Minimal subset of homogeneous `vectors` (elements of `⊕ R(-shifts_k)`)
    /// generating the same submodule, ordered by degree.
    pub fn minimal_generators(&self, shifts: &[i32], vectors: &[FreeModuleVector]) -> Vec<FreeModuleVector> {
        let mut order: Vec<(i32, usize)> = vectors
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.degree().map(|d| (d, i)))
            .collect();
        order.sort();
        let Some(&(dmax, _)) = order.last() else { return Vec::new() };
        let dmin = order[0].0;
        let min_shift = shifts.iter().copied().min().unwrap_or(0);
        let tables = self.tables((dmax - min_shift).max(0) as usize);
        let mut kept: Vec<(i32, Vec<u32>)> = Vec::new();
        let mut out = Vec::new();
        for d in dmin..=dmax {
            let layout = tables.layout(shifts, d);
            let mut span = Echelon::new(self.field(), layout.total);
            for (e, coords) in &kept {
                for w in tables.multiples(shifts, coords, *e, d - e) {
                    span.insert(&w);
                }
            }
            for &(vd, i) in order.iter().filter(|(vd, _)| *vd == d) {
                let c = tables.vector_coords(&vectors[i], vd);
                if span.insert(&c) {
                    kept.push((vd, c));
                    out.push(vectors[i].clone());
                }
            }
        }
        out
    }
}

/// A graded ring map `R -> R'` given by images of the variables.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Arc<QuotientRing>,
    target: Arc<QuotientRing>,
    images: Vec<Polynomial>,
}

impl RingMap {
    pub fn source(&self) -> &Arc<QuotientRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<QuotientRing> {
        &self.target
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        self.target.reduce(&f.substitute(self.target.poly_ring(), &self.images))
    }
}

/// Offsets of the blocks `R_{d - shift_k}` inside `(⊕ R(-shift_k))_d`.
#[derive(Clone, Debug)]
pub struct Layout {
    pub offsets: Vec<usize>,
    pub dims: Vec<usize>,
    pub total: usize,
}

/// Truncated multiplication tables of a quotient ring.
#[derive(Debug)]
pub struct GradedTables {
    field: PrimeField,
    nvars: usize,
    max_degree: usize,
    bases: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
    /// `mult[d][v][b]`: sparse coordinates of `x_v * B_d[b]` in `R_{d+1}`
    mult: Vec<Vec<Vec<Vec<(usize, u32)>>>>,
    /// `parent[d][b] = (v, b')` with `B_d[b] = x_v * B_{d-1}[b']`
    parent: Vec<Vec<(usize, usize)>>,
    poly: Arc<PolyRing>,
}

impl GradedTables {
    fn build(poly: &Arc<PolyRing>, gb: &GroebnerBasis, max_degree: usize) -> Self {
        let n = poly.nvars();
        let lts = gb.leading_monomials();
        let mut bases = Vec::new();
        let mut index = Vec::new();
        for d in 0..=max_degree {
            let b: Vec<Monomial> = if lts.iter().any(|m| m.is_one()) {
                Vec::new()
            } else {
                Monomial::all_of_degree(n, d as u32)
                    .into_iter()
                    .filter(|m| !lts.iter().any(|l| l.divides(m)))
                    .collect()
            };
            index.push(b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect::<HashMap<_, _>>());
            bases.push(b);
        }
        let mut mult = Vec::new();
        for d in 0..max_degree {
            let mut per_var = Vec::new();
            for v in 0..n {
                let mut col = Vec::new();
                for b in &bases[d] {
                    let m = b.mul_var(v);
                    if let Some(&i) = index[d + 1].get(&m) {
                        col.push(vec![(i, 1)]);
                    } else {
                        let nf = gb.reduce(&Polynomial::monomial(poly, 1, m));
                        col.push(nf.terms().iter().map(|(c, t)| (index[d + 1][t], *c)).collect());
                    }
                }
                per_var.push(col);
            }
            mult.push(per_var);
        }
        let mut parent = vec![Vec::new()];
        for d in 1..=max_degree {
            let ps = bases[d]
                .iter()
                .map(|b| {
                    let v = b.exps().iter().position(|&e| e > 0).unwrap();
                    let mut e = b.exps().to_vec();
                    e[v] -= 1;
                    (v, index[d - 1][&Monomial::new(e)])
                })
                .collect();
            parent.push(ps);
        }
        GradedTables { field: poly.field(), nvars: n, max_degree, bases, index, mult, parent, poly: poly.clone() }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn basis(&self, d: usize) -> &[Monomial] {
        &self.bases[d]
    }

    pub fn dim(&self, d: i32) -> usize {
        if d < 0 {
            return 0;
        }
        assert!(d as usize <= self.max_degree, "degree {d} beyond table bound {}", self.max_degree);
        self.bases[d as usize].len()
    }

    /// Coordinates of a homogeneous polynomial of degree `d` that is
    /// already in normal form.
    pub fn coords(&self, f: &Polynomial, d: i32) -> Vec<u32> {
        let mut v = vec![0; self.dim(d)];
        for (c, m) in f.terms() {
            debug_assert_eq!(m.degree() as i32, d);
            v[self.index[d as usize][m]] = *c;
        }
        v
    }

    pub fn poly_from_coords(&self, d: i32, coords: &[u32]) -> Polynomial {
        if d < 0 {
            return Polynomial::zero(&self.poly);
        }
        let terms = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (c, self.bases[d as usize][i].clone()))
            .collect();
        Polynomial::from_terms(&self.poly, terms)
    }

    pub fn layout(&self, shifts: &[i32], d: i32) -> Layout {
        let mut offsets = Vec::with_capacity(shifts.len());
        let mut dims = Vec::with_capacity(shifts.len());
        let mut total = 0;
        for &s in shifts {
            offsets.push(total);
            let k = self.dim(d - s);
            dims.push(k);
            total += k;
        }
        Layout { offsets, dims, total }
    }

    /// Coordinates of a homogeneous vector (components already reduced) in degree `d`.
    pub fn vector_coords(&self, v: &FreeModuleVector, d: i32) -> Vec<u32> {
        let layout = self.layout(v.shifts(), d);
        let mut out = vec![0; layout.total];
        for (k, c) in v.components().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = d - v.shifts()[k];
            for (a, m) in c.terms() {
                out[layout.offsets[k] + self.index[e as usize][m]] = *a;
            }
        }
        out
    }

    pub fn vector_from_coords(&self, shifts: &[i32], d: i32, coords: &[u32]) -> FreeModuleVector {
        let layout = self.layout(shifts, d);
        let comps = (0..shifts.len())
            .map(|k| {
                let block = &coords[layout.offsets[k]..layout.offsets[k] + layout.dims[k]];
                self.poly_from_coords(d - shifts[k], block)
            })
            .collect();
        FreeModuleVector::new(comps, shifts.to_vec())
    }

    /// `x_var * v` for `v` in degree `d` of `⊕ R(-shifts_k)`.
    pub fn mul_var(&self, shifts: &[i32], d: i32, v: &[u32], var: usize) -> Vec<u32> {
        let src = self.layout(shifts, d);
        let dst = self.layout(shifts, d + 1);
        let mut out = vec![0u32; dst.total];
        let p = self.field.p() as u64;
        for (k, &s) in shifts.iter().enumerate() {
            let e = d - s;
            if e < 0 || src.dims[k] == 0 {
                continue;
            }
            let table = &self.mult[e as usize][var];
            for j in 0..src.dims[k] {
                let c = v[src.offsets[k] + j];
                if c == 0 {
                    continue;
                }
                for &(i, a) in &table[j] {
                    let slot = &mut out[dst.offsets[k] + i];
                    *slot = ((*slot as u64 + c as u64 * a as u64) % p) as u32;
                }
            }
        }
        out
    }

    /// `b * v` for every standard monomial `b` of degree `c`, in basis order.
    pub fn multiples(&self, shifts: &[i32], v: &[u32], d: i32, c: i32) -> Vec<Vec<u32>> {
        if c < 0 {
            return Vec::new();
        }
        let mut level = vec![v.to_vec()];
        for e in 1..=c {
            let next = self.parent[e as usize]
                .iter()
                .map(|&(var, b)| self.mul_var(shifts, d + e - 1, &level[b], var))
                .collect();
            level = next;
        }
        level
    }

    /// `f * v` for a homogeneous ring element `f` of degree `c` in normal form.
    pub fn mul_poly(&self, shifts: &[i32], v: &[u32], d: i32, f: &Polynomial, c: i32) -> Vec<u32> {
        let total = self.layout(shifts, d + c).total;
        let mut out = vec![0u32; total];
        if f.is_zero() {
            return out;
        }
        let mults = self.multiples(shifts, v, d, c);
        for (a, m) in f.terms() {
            let idx = self.index[c as usize][m];
            crate::linalg::axpy(&self.field, &mut out, *a, &mults[idx]);
        }
        out
    }
}

/// Hilbert series `N(t)/(1-t)^n` with its truncated expansion and the
/// invariants read off the rational form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    /// coefficients of `N(t)`, lowest degree first
    pub numerator: Vec<i64>,
    /// exponent `n` of the denominator `(1-t)^n`
    pub denominator_exponent: usize,
    /// `dim_k` of the graded pieces in degrees `0..=D`
    pub expansion: Vec<u64>,
    /// numerator after cancelling every factor `(1-t)`
    pub reduced_numerator: Vec<i64>,
    pub krull_dim: usize,
    pub multiplicity: i64,
    pub codim: usize,
}

impl HilbertSeries {
    pub fn from_numerator(numerator: Vec<i64>, n: usize, max_degree: usize) -> Self {
        let numerator = trim(numerator);
        let mut reduced = numerator.clone();
        let mut cancelled = 0;
        if reduced.is_empty() {
            cancelled = n;
        } else {
            while cancelled < n && reduced.iter().sum::<i64>() == 0 {
                reduced = divide_one_minus_t(&reduced);
                cancelled += 1;
            }
        }
        let krull_dim = n - cancelled;
        let multiplicity = reduced.iter().sum();
        let expansion = series_over_one_minus_t(&numerator, n, max_degree)
            .into_iter()
            .map(|c| u64::try_from(c).expect("negative Hilbert coefficient"))
            .collect();
        HilbertSeries {
            numerator,
            denominator_exponent: n,
            expansion,
            reduced_numerator: reduced,
            krull_dim,
            multiplicity,
            codim: n - krull_dim,
        }
    }

    /// Expansion coefficients in degrees `0..=d`, recomputed from the rational form.
    pub fn coefficients(&self, d: usize) -> Vec<i64> {
        series_over_one_minus_t(&self.numerator, self.denominator_exponent, d)
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// `N(t)/(1-t)`, assuming `N(1) = 0`.
fn divide_one_minus_t(n: &[i64]) -> Vec<i64> {
    let mut q = Vec::with_capacity(n.len());
    let mut acc = 0;
    for &c in &n[..n.len().saturating_sub(1)] {
        acc += c;
        q.push(acc);
    }
    trim(q)
}

/// Coefficients of `N(t)/(1-t)^n` up to degree `d`.
pub fn series_over_one_minus_t(numerator: &[i64], n: usize, d: usize) -> Vec<i64> {
    let mut s: Vec<i64> = (0..=d).map(|i| numerator.get(i).copied().unwrap_or(0)).collect();
    for _ in 0..n {
        for i in 1..s.len() {
            s[i] += s[i - 1];
        }
    }
    s
}

/// Numerator `N(t)` of the Hilbert series `N(t)/(1-t)^n` of `S/(gens)` for a
/// monomial ideal, by recursive pivoting on a variable:
/// `N(I) = N(I + (x)) + t * N(I : x)`.
pub fn hilbert_numerator(gens: &[Monomial], n: usize) -> Vec<i64> {
    let gens = minimalize(gens.to_vec());
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return Vec::new();
    }
    let coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        let mut acc = vec![1i64];
        for m in &gens {
            let d = m.degree() as usize;
            let mut next = vec![0i64; acc.len() + d];
            for (i, &c) in acc.iter().enumerate() {
                next[i] += c;
                next[i + d] -= c;
            }
            acc = next;
        }
        return trim(acc);
    }
    // pivot on the variable occurring in the most generators
    let var = (0..n)
        .max_by_key(|&v| (gens.iter().filter(|m| m.exps()[v] > 0).count(), std::cmp::Reverse(v)))
        .unwrap();
    let x = Monomial::var(var, n);
    let mut plus = gens.clone();
    plus.push(x.clone());
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let mut e = m.exps().to_vec();
            if e[var] > 0 {
                e[var] -= 1;
            }
            Monomial::new(e)
        })
        .collect();
    let a = hilbert_numerator(&plus, n);
    let b = hilbert_numerator(&colon, n);
    let mut out = vec![0i64; a.len().max(b.len() + 1)];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i + 1] += c;
    }
    trim(out)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.exps().cmp(b.exps())));
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for g in gens {
        if !out.iter().any(|m| m.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Cokernel of a graded map `⊕ R(-c_j) -> ⊕ R(-a_k)`: a finitely generated
/// graded module. Presentations are normalized on construction, so every
/// relation has entries in the maximal ideal and the rows are a minimal
/// generating set.
#[derive(Clone, Debug)]
pub struct GradedModule {
    ring: Arc<QuotientRing>,
    shifts: Vec<i32>,
    columns: Vec<FreeModuleVector>,
    normalized: bool,
    gb: OnceLock<ModuleGroebnerBasis>,
}

impl PartialEq for GradedModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.shifts == other.shifts && self.columns == other.columns
    }
}

impl GradedModule {
    /// Validates and normalizes a presentation.
    pub fn new(ring: &Arc<QuotientRing>, shifts: Vec<i32>, columns: Vec<FreeModuleVector>) -> Result<Self> {
        if let Some(s) = shifts.iter().find(|&&s| s < 0) {
            return Err(Error::InvalidArgument(format!("negative shift {s}")));
        }
        let mut cols = Vec::with_capacity(columns.len());
        for c in columns {
            if c.shifts() != shifts.as_slice() {
                return Err(Error::InvalidArgument(format!(
                    "column has {} entries, expected {}",
                    c.rank(),
                    shifts.len()
                )));
            }
            let c = c.map_components(|f| ring.reduce(f));
            if !c.is_homogeneous() {
                return Err(Error::NonHomogeneous(format!(
                    "column [{}]",
                    c.components().iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
                )));
            }
            if !c.is_zero() {
                cols.push(c);
            }
        }
        let (shifts, cols) = prune_units(ring, shifts, cols);
        Ok(GradedModule { ring: ring.clone(), shifts, columns: cols, normalized: true, gb: OnceLock::new() })
    }

    pub fn free(ring: &Arc<QuotientRing>, shifts: Vec<i32>) -> Result<Self> {
        Self::new(ring, shifts, Vec::new())
    }

    /// The residue field `k = R/m`, generated in degree 0.
    pub fn residue_field(ring: &Arc<QuotientRing>) -> Self {
        let cols = (0..ring.nvars()).map(|i| FreeModuleVector::new(vec![ring.var(i)], vec![0])).collect();
        Self::new(ring, vec![0], cols).expect("variables are homogeneous")
    }

    /// `R/(gens)` as a cyclic module generated in degree 0.
    pub fn cyclic(ring: &Arc<QuotientRing>, gens: &[Polynomial]) -> Result<Self> {
        let cols = gens.iter().map(|g| FreeModuleVector::new(vec![g.rebase(ring.poly_ring())], vec![0])).collect();
        Self::new(ring, vec![0], cols)
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }

    pub fn columns(&self) -> &[FreeModuleVector] {
        &self.columns
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Smallest generator degree, `None` for the zero module.
    pub fn indeg(&self) -> Option<i32> {
        self.shifts.iter().copied().min()
    }

    /// Distinct generator degrees.
    pub fn generation_degrees(&self) -> Vec<i32> {
        let mut d = self.shifts.clone();
        d.sort();
        d.dedup();
        d
    }

    /// The same module with every degree lowered by `g`.
    pub fn shifted(&self, g: i32) -> Result<Self> {
        let shifts: Vec<i32> = self.shifts.iter().map(|s| s - g).collect();
        let cols = self
            .columns
            .iter()
            .map(|c| FreeModuleVector::new(c.components().to_vec(), shifts.clone()))
            .collect();
        Self::new(&self.ring, shifts, cols)
    }

    /// Submodule Gröbner basis over the ambient ring: the relations together
    /// with `I e_k`.
    pub fn groebner(&self) -> &ModuleGroebnerBasis {
        self.gb.get_or_init(|| {
            let mut gens = self.columns.clone();
            for k in 0..self.rank() {
                for g in self.ring.defining_gb().generators() {
                    let mut comps = vec![Polynomial::zero(self.ring.poly_ring()); self.rank()];
                    comps[k] = g.clone();
                    gens.push(FreeModuleVector::new(comps, self.shifts.clone()));
                }
            }
            ModuleGroebnerBasis::new(self.ring.poly_ring(), &self.shifts, &gens, None)
        })
    }

    /// Whether the element `v` of the free cover is zero in the module.
    pub fn is_zero_element(&self, v: &FreeModuleVector) -> bool {
        self.groebner().contains(v)
    }

    /// Whether `(gens)` annihilates the module.
    pub fn is_annihilated_by(&self, gens: &[Polynomial]) -> bool {
        gens.iter().all(|g| {
            (0..self.rank()).all(|k| {
                let mut comps = vec![Polynomial::zero(self.ring.poly_ring()); self.rank()];
                comps[k] = g.rebase(self.ring.poly_ring());
                self.is_zero_element(&FreeModuleVector::new(comps, self.shifts.clone()))
            })
        })
    }

    /// Standard monomials times generators in degree `d`: pairs `(m, k)`
    /// meaning `m e_k`, not in the leading-term module.
    pub fn graded_piece_basis(&self, d: i32) -> Vec<(Monomial, usize)> {
        let lts = self.groebner().leading_monomials_by_position();
        let mut out = Vec::new();
        for (k, &s) in self.shifts.iter().enumerate() {
            if d < s {
                continue;
            }
            for m in Monomial::all_of_degree(self.ring.nvars(), (d - s) as u32) {
                if !lts[k].iter().any(|l| l.divides(&m)) {
                    out.push((m, k));
                }
            }
        }
        out
    }

    /// `dim_k M_d` by rank computation on the presentation.
    pub fn dim(&self, d: i32) -> usize {
        let Some(lo) = self.indeg() else { return 0 };
        if d < lo {
            return 0;
        }
        let tables = self.ring.tables((d - lo) as usize);
        let total = tables.layout(&self.shifts, d).total;
        let mut span = Echelon::new(self.ring.field(), total);
        for c in &self.columns {
            let e = c.degree().unwrap();
            if e > d {
                continue;
            }
            let v = tables.vector_coords(c, e);
            for w in tables.multiples(&self.shifts, &v, e, d - e) {
                span.insert(&w);
            }
        }
        total - span.dim()
    }

    /// Hilbert series from the leading-term module.
    pub fn hilbert_series(&self, max_degree: usize) -> HilbertSeries {
        let n = self.ring.nvars();
        let lts = self.groebner().leading_monomials_by_position();
        let mut num: Vec<i64> = Vec::new();
        for (k, &s) in self.shifts.iter().enumerate() {
            let part = hilbert_numerator(&lts[k], n);
            let s = s as usize;
            if num.len() < part.len() + s {
                num.resize(part.len() + s, 0);
            }
            for (i, c) in part.iter().enumerate() {
                num[i + s] += c;
            }
        }
        HilbertSeries::from_numerator(num, n, max_degree)
    }

    /// Adds the relations `g e_k` for every generator `g`, giving `M/(gens)M`.
    pub fn annihilated_by(&self, gens: &[Polynomial]) -> Result<Self> {
        let mut cols = self.columns.clone();
        for g in gens {
            for k in 0..self.rank() {
                let mut comps = vec![Polynomial::zero(self.ring.poly_ring()); self.rank()];
                comps[k] = g.rebase(self.ring.poly_ring());
                cols.push(FreeModuleVector::new(comps, self.shifts.clone()));
            }
        }
        Self::new(&self.ring, self.shifts.clone(), cols)
    }

    /// Presentation of the submodule generated by the images of `elements`
    /// (homogeneous elements of the free cover).
    pub fn submodule(&self, elements: &[FreeModuleVector]) -> Result<Self> {
        let mut src = Vec::new();
        let mut kept = Vec::new();
        for e in elements {
            let e = e.map_components(|f| self.ring.reduce(f));
            if !e.is_homogeneous() {
                return Err(Error::NonHomogeneous("submodule generator".into()));
            }
            if let Some(d) = e.degree() {
                if !self.is_zero_element(&e) {
                    src.push(d);
                    kept.push(e);
                }
            }
        }
        if kept.is_empty() {
            return Self::free(&self.ring, Vec::new());
        }
        let s = kept.len();
        let mut vectors = kept.clone();
        let mut all_src = src.clone();
        for c in &self.columns {
            vectors.push(c.clone());
            all_src.push(c.degree().unwrap());
        }
        let raw = raw_syzygies(self.ring.poly_ring(), self.ring.defining_gb(), &self.shifts, &vectors, &all_src, None);
        let cols: Vec<FreeModuleVector> = raw
            .into_iter()
            .map(|v| FreeModuleVector::new(v.components()[..s].iter().map(|c| self.ring.reduce(c)).collect(), src.clone()))
            .filter(|v| !v.is_zero())
            .collect();
        let cols = self.ring.minimal_generators(&src, &cols);
        Self::new(&self.ring, src, cols)
    }

    /// `m M`, generated by `x_i e_k`.
    pub fn maximal_ideal_times(&self) -> Result<Self> {
        let mut gens = Vec::new();
        for k in 0..self.rank() {
            for v in 0..self.ring.nvars() {
                let mut comps = vec![Polynomial::zero(self.ring.poly_ring()); self.rank()];
                comps[k] = self.ring.var(v);
                gens.push(FreeModuleVector::new(comps, self.shifts.clone()));
            }
        }
        self.submodule(&gens)
    }

    /// `(forms) M`, generated by `l e_k`.
    pub fn ideal_times(&self, forms: &[Polynomial]) -> Result<Self> {
        let mut gens = Vec::new();
        for k in 0..self.rank() {
            for l in forms {
                let mut comps = vec![Polynomial::zero(self.ring.poly_ring()); self.rank()];
                comps[k] = l.rebase(self.ring.poly_ring());
                gens.push(FreeModuleVector::new(comps, self.shifts.clone()));
            }
        }
        self.submodule(&gens)
    }

    /// The module viewed over the target of `map`; it must be annihilated
    /// by the kernel of the map for this to be the same module.
    pub fn transfer(&self, map: &RingMap) -> Result<Self> {
        let target = map.target();
        let cols = self
            .columns
            .iter()
            .map(|c| FreeModuleVector::new(c.components().iter().map(|f| map.apply(f)).collect(), self.shifts.clone()))
            .collect();
        Self::new(target, self.shifts.clone(), cols)
    }
}

/// Removes relations with a unit entry together with the generator they
/// express, preserving the cokernel.
fn prune_units(ring: &QuotientRing, mut shifts: Vec<i32>, mut cols: Vec<FreeModuleVector>) -> (Vec<i32>, Vec<FreeModuleVector>) {
    let field = ring.field();
    loop {
        let found = cols.iter().enumerate().find_map(|(ci, c)| {
            c.components()
                .iter()
                .position(|f| f.degree() == Some(0))
                .map(|r| (ci, r))
        });
        let Some((ci, r)) = found else { break };
        let pivot = cols.remove(ci);
        let a = pivot.components()[r].terms()[0].0;
        let inv = field.inv(a);
        let mut new_shifts = shifts.clone();
        new_shifts.remove(r);
        let mut next = Vec::with_capacity(cols.len());
        for c in cols {
            let f = &c.components()[r];
            let comps: Vec<Polynomial> = if f.is_zero() {
                c.components().to_vec()
            } else {
                let factor = f.scale(field.neg(inv));
                c.components()
                    .iter()
                    .zip(pivot.components())
                    .map(|(x, y)| ring.reduce(&x.add_scaled(&factor.mul_unchecked(y), 1, None)))
                    .collect()
            };
            let mut comps = comps;
            comps.remove(r);
            let v = FreeModuleVector::new(comps, new_shifts.clone());
            if !v.is_zero() {
                next.push(v);
            }
        }
        shifts = new_shifts;
        cols = next;
    }
    (shifts, cols)
}
