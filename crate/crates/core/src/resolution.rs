//! Truncated minimal graded free resolutions, Betti tables, regularity
//! verdicts and the linear part of a minimal complex.
//!
//! Resolutions are built one internal degree at a time. In degree `d` the
//! new generators of `F_i` are a complement, inside `ker(d_{i-1})_d`, of the
//! span of the multiples of generators found in lower degrees. Choosing them
//! this way makes the resolution minimal by construction, and everything in
//! internal degree `<= d_max` is exact.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groebner::{syzygy_basis, FreeModuleVector};
use crate::linalg::{kernel, rank, Echelon};
use crate::arith::Polynomial;
use crate::quotient::{GradedModule, GradedTables, QuotientRing, RingMap};

/// A bounded graded complex `F_L -> ... -> F_1 -> F_0` of free modules.
///
/// `maps[i - 1]` holds the columns of `d_i : F_i -> F_{i-1}`; column `c`
/// is the image of the `c`-th basis element, of degree `shifts[i][c]`.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    ring: Arc<QuotientRing>,
    shifts: Vec<Vec<i32>>,
    maps: Vec<Vec<FreeModuleVector>>,
    i_max: usize,
    d_max: i32,
}

impl GradedComplex {
    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    /// Shifts of `F_i`; empty past the computed length.
    pub fn shifts(&self, i: usize) -> &[i32] {
        self.shifts.get(i).map_or(&[], |s| s.as_slice())
    }

    /// Columns of `d_i`.
    pub fn differential(&self, i: usize) -> &[FreeModuleVector] {
        if i == 0 {
            return &[];
        }
        self.maps.get(i - 1).map_or(&[], |m| m.as_slice())
    }

    /// Index of the last nonzero free module, if any.
    pub fn length(&self) -> Option<usize> {
        self.shifts.iter().rposition(|s| !s.is_empty())
    }

    pub fn bounds(&self) -> (usize, i32) {
        (self.i_max, self.d_max)
    }

    fn tables(&self) -> Arc<GradedTables> {
        self.ring.tables(self.d_max.max(0) as usize)
    }

    /// Matrix of `d_i` in internal degree `d`, as columns indexed by the
    /// monomial basis of `(F_i)_d`.
    pub fn matrix(&self, i: usize, d: i32) -> Vec<Vec<u32>> {
        let tables = self.tables();
        let src = self.shifts(i);
        if i == 0 {
            return vec![Vec::new(); tables.layout(src, d).total];
        }
        let tgt = self.shifts(i - 1);
        map_matrix(&tables, src, tgt, self.differential(i), d)
    }

    /// `dim_k H_i` of the complex in internal degree `d`. The module above
    /// the top computed index is taken to be zero.
    pub fn homology_dims(&self, i: usize, d: i32) -> Result<usize> {
        if i > self.i_max || d > self.d_max {
            return Err(Error::Bounds(format!("({i}, {d}) outside ({}, {})", self.i_max, self.d_max)));
        }
        let tables = self.tables();
        let n = tables.layout(self.shifts(i), d).total;
        if n == 0 {
            return Ok(0);
        }
        let field = self.ring.field();
        let out_rank = if i == 0 { 0 } else { rank(field, &self.matrix(i, d)) };
        let in_rank = if i < self.i_max { rank(field, &self.matrix(i + 1, d)) } else { 0 };
        Ok(n - out_rank - in_rank)
    }

    /// Whether `d_{i-1} d_i = 0` in every internal degree up to the bound.
    pub fn composites_vanish(&self) -> bool {
        let field = self.ring.field();
        let tables = self.tables();
        (2..=self.maps.len()).all(|i| {
            (0..=self.d_max).all(|d| {
                let outer = self.matrix(i - 1, d);
                let len = tables.layout(self.shifts(i - 2), d).total;
                self.matrix(i, d).iter().all(|col| {
                    let mut acc = vec![0u32; len];
                    for (c, o) in col.iter().zip(&outer) {
                        crate::linalg::axpy(&field, &mut acc, *c, o);
                    }
                    acc.iter().all(|&x| x == 0)
                })
            })
        })
    }

    /// Whether no differential has an entry with a nonzero constant term.
    pub fn is_minimal(&self) -> bool {
        (1..=self.maps.len()).all(|i| {
            let tgt = self.shifts(i - 1);
            self.differential(i).iter().zip(self.shifts(i)).all(|(col, &s)| {
                col.components().iter().zip(tgt).all(|(f, &t)| f.is_zero() || s - t >= 1)
            })
        })
    }

    /// Base change along a ring map: the complex `F ⊗_R R'`.
    pub fn transfer(&self, map: &RingMap) -> GradedComplex {
        let maps = self
            .maps
            .iter()
            .map(|cols| {
                cols.iter()
                    .map(|c| FreeModuleVector::new(c.components().iter().map(|f| map.apply(f)).collect(), c.shifts().to_vec()))
                    .collect()
            })
            .collect();
        GradedComplex { ring: map.target().clone(), shifts: self.shifts.clone(), maps, i_max: self.i_max, d_max: self.d_max }
    }
}

/// Columns of the map `⊕ R(-src_c) -> ⊕ R(-tgt_k)` in degree `d`.
fn map_matrix(tables: &GradedTables, src: &[i32], tgt: &[i32], cols: &[FreeModuleVector], d: i32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for (col, &s) in cols.iter().zip(src) {
        if d < s {
            continue;
        }
        let v = tables.vector_coords(col, s);
        out.extend(tables.multiples(tgt, &v, s, d - s));
    }
    out
}

/// A truncated minimal graded free resolution of a module.
#[derive(Clone, Debug)]
pub struct Resolution {
    module: GradedModule,
    complex: GradedComplex,
}

impl Resolution {
    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn bounds(&self) -> (usize, i32) {
        self.complex.bounds()
    }

    pub fn shifts(&self, i: usize) -> &[i32] {
        self.complex.shifts(i)
    }

    pub fn differential(&self, i: usize) -> &[FreeModuleVector] {
        self.complex.differential(i)
    }

    pub fn homology_dims(&self, i: usize, d: i32) -> Result<usize> {
        self.complex.homology_dims(i, d)
    }

    /// Whether the computed resolution is the whole resolution: it stops
    /// before `i_max`, and untruncated syzygy computations confirm that
    /// every kernel is generated within the degree bound and the last map
    /// is injective.
    pub fn certify_finite(&self) -> bool {
        let (i_max, d_max) = self.bounds();
        let len = self.complex.length().unwrap_or(0);
        if self.module.rank() == 0 {
            return true;
        }
        if len >= i_max {
            return false;
        }
        if self.module.columns().iter().any(|c| c.degree().unwrap() > d_max) {
            return false;
        }
        let ring = self.module.ring();
        for i in 1..=len {
            let Ok(syz) = syzygy_basis(ring, self.differential(i), None) else { return false };
            if i == len && !syz.is_empty() {
                return false;
            }
            if syz.iter().any(|v| v.degree().unwrap() > d_max) {
                return false;
            }
        }
        true
    }
}

/// Minimal graded free resolution of `module` up to homological degree
/// `i_max` and internal degree `d_max`.
pub fn resolve(module: &GradedModule, i_max: usize, d_max: i32) -> Result<Resolution> {
    if i_max < 1 || d_max < 0 {
        return Err(Error::Bounds(format!("need i_max >= 1 and d_max >= 0, got ({i_max}, {d_max})")));
    }
    let ring = module.ring().clone();
    let field = ring.field();
    let tables = ring.tables(d_max as usize);
    let f0: Vec<i32> = module.shifts().to_vec();
    let mut shifts = vec![f0.clone()];
    let mut maps: Vec<Vec<FreeModuleVector>> = Vec::new();

    // d_1: a minimal subset of the presentation columns
    let mut cols1 = Vec::new();
    let mut src1 = Vec::new();
    {
        let mut kept: Vec<(i32, Vec<u32>)> = Vec::new();
        for d in 0..=d_max {
            let layout = tables.layout(&f0, d);
            let mut span = Echelon::new(field, layout.total);
            for (e, v) in &kept {
                for w in tables.multiples(&f0, v, *e, d - e) {
                    span.insert(&w);
                }
            }
            for c in module.columns().iter().filter(|c| c.degree() == Some(d)) {
                let v = tables.vector_coords(c, d);
                if span.insert(&v) {
                    kept.push((d, v));
                    cols1.push(c.clone());
                    src1.push(d);
                }
            }
        }
    }
    if src1.is_empty() {
        return Ok(finish(module, ring, shifts, maps, i_max, d_max));
    }
    shifts.push(src1);
    maps.push(cols1);

    for i in 2..=i_max {
        let prev = shifts[i - 1].clone();
        let tgt = shifts[i - 2].clone();
        let lo = match prev.iter().min() {
            Some(&m) => m + 1,
            None => break,
        };
        let mut kept: Vec<(i32, Vec<u32>)> = Vec::new();
        let mut cols = Vec::new();
        let mut src = Vec::new();
        for d in lo..=d_max {
            let a = map_matrix(&tables, &prev, &tgt, &maps[i - 2], d);
            let len = tables.layout(&tgt, d).total;
            let n = tables.layout(&prev, d).total;
            if n == 0 {
                continue;
            }
            let ker = kernel(field, &a, len);
            if ker.is_empty() {
                continue;
            }
            let mut span = Echelon::new(field, n);
            for (e, v) in &kept {
                for w in tables.multiples(&prev, v, *e, d - e) {
                    span.insert(&w);
                }
            }
            for v in ker {
                if span.insert(&v) {
                    cols.push(tables.vector_from_coords(&prev, d, &v));
                    kept.push((d, v));
                    src.push(d);
                }
            }
        }
        if src.is_empty() {
            break;
        }
        shifts.push(src);
        maps.push(cols);
    }
    Ok(finish(module, ring, shifts, maps, i_max, d_max))
}

fn finish(
    module: &GradedModule,
    ring: Arc<QuotientRing>,
    shifts: Vec<Vec<i32>>,
    maps: Vec<Vec<FreeModuleVector>>,
    i_max: usize,
    d_max: i32,
) -> Resolution {
    Resolution { module: module.clone(), complex: GradedComplex { ring, shifts, maps, i_max, d_max } }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub imax: usize,
    pub dmax: i32,
}

/// Graded Betti numbers `β_{ij}` within bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<(usize, i32), usize>,
    bounds: Bounds,
    finite: bool,
}

impl BettiTable {
    pub fn new(entries: BTreeMap<(usize, i32), usize>, imax: usize, dmax: i32) -> Self {
        let entries = entries.into_iter().filter(|&(_, c)| c > 0).collect();
        BettiTable { entries, bounds: Bounds { imax, dmax }, finite: false }
    }

    pub fn get(&self, i: usize, j: i32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, i32), usize> {
        &self.entries
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    /// Whether the table was certified to be the complete Betti table.
    pub fn is_complete(&self) -> bool {
        self.finite
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total Betti numbers `β_0 .. β_{i_max}`.
    pub fn totals(&self) -> Vec<usize> {
        let mut t = vec![0; self.bounds.imax + 1];
        for (&(i, _), &c) in &self.entries {
            t[i] += c;
        }
        t
    }

    /// `(i, j)` positions with `j - i` different from `g`, in order.
    pub fn off_diagonal(&self, g: i32) -> Vec<(usize, i32)> {
        self.entries.keys().filter(|(i, j)| j - *i as i32 != g).copied().collect()
    }

    pub fn to_json(&self) -> BettiJson {
        BettiJson {
            bounds: self.bounds,
            complete: self.finite,
            entries: self.entries.iter().map(|(&(i, j), &c)| (format!("{i},{j}"), c)).collect(),
            totals: self.totals(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiJson {
    pub bounds: Bounds,
    pub complete: bool,
    pub entries: BTreeMap<String, usize>,
    pub totals: Vec<usize>,
}

/// Triangular layout: columns are homological degrees, rows are `j - i`,
/// zeros print as `.`.
impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let totals = self.totals();
        let ncols = self.entries.keys().map(|&(i, _)| i + 1).max().unwrap_or(0).max(1);
        let rows: Vec<i32> = {
            let mut r: Vec<i32> = self.entries.keys().map(|&(i, j)| j - i as i32).collect();
            r.sort();
            r.dedup();
            r
        };
        let mut cells: Vec<Vec<String>> = Vec::new();
        cells.push((0..ncols).map(|i| i.to_string()).collect());
        cells.push((0..ncols).map(|i| totals.get(i).copied().unwrap_or(0).to_string()).collect());
        for &r in &rows {
            cells.push(
                (0..ncols)
                    .map(|i| match self.get(i, i as i32 + r) {
                        0 => ".".to_string(),
                        c => c.to_string(),
                    })
                    .collect(),
            );
        }
        let widths: Vec<usize> = (0..ncols).map(|c| cells.iter().map(|row| row[c].len()).max().unwrap()).collect();
        let mut labels = vec![String::new(), "total:".to_string()];
        labels.extend(rows.iter().map(|r| format!("{r}:")));
        let lw = labels.iter().map(|l| l.len()).max().unwrap();
        for (label, row) in labels.iter().zip(&cells) {
            let mut line = format!("{label:>lw$}");
            for (cell, w) in row.iter().zip(&widths) {
                line.push_str(&format!(" {cell:>w$}"));
            }
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}

/// Counts the shifts of each free module, up to the degree bound.
pub fn betti_table(res: &Resolution) -> BettiTable {
    let (i_max, d_max) = res.bounds();
    let mut entries = BTreeMap::new();
    for i in 0..=i_max {
        for &s in res.shifts(i) {
            if s <= d_max {
                *entries.entry((i, s)).or_insert(0) += 1;
            }
        }
    }
    let mut t = BettiTable::new(entries, i_max, d_max);
    t.finite = res.certify_finite();
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Regularity {
    /// certified: the table is the complete Betti table
    Exact(i32),
    /// the largest `j - i` seen may be exceeded beyond the degree bound
    AtLeast(i32),
    /// every position that could exceed the value lies within bounds
    UpToBounds(i32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityVerdict {
    #[serde(flatten)]
    pub regularity: Regularity,
    pub bounds: Bounds,
}

impl RegularityVerdict {
    pub fn value(&self) -> i32 {
        match self.regularity {
            Regularity::Exact(r) | Regularity::AtLeast(r) | Regularity::UpToBounds(r) => r,
        }
    }
}

/// `max(j - i)` over the table, qualified by how far it can be trusted.
///
/// The zero module is reported as `Exact(i32::MIN)`.
pub fn regularity_verdict(betti: &BettiTable) -> RegularityVerdict {
    let bounds = betti.bounds();
    let Some(r) = betti.entries().keys().map(|&(i, j)| j - i as i32).max() else {
        return RegularityVerdict { regularity: Regularity::Exact(i32::MIN), bounds };
    };
    let regularity = if betti.is_complete() {
        Regularity::Exact(r)
    } else if (0..=bounds.imax).any(|i| i as i32 + r + 1 > bounds.dmax) {
        Regularity::AtLeast(r)
    } else {
        Regularity::UpToBounds(r)
    };
    RegularityVerdict { regularity, bounds }
}

/// The linear part: each differential entry is replaced by its component
/// of degree one, which for a minimal complex means dropping entries
/// between generators whose degrees differ by two or more.
pub fn linear_part(res: &Resolution) -> Result<GradedComplex> {
    let cx = res.complex();
    if !cx.is_minimal() {
        return Err(Error::Precondition("linear part needs a minimal complex".into()));
    }
    let maps = (1..=cx.maps.len())
        .map(|i| {
            let tgt = cx.shifts(i - 1);
            cx.differential(i)
                .iter()
                .zip(cx.shifts(i))
                .map(|(col, &s)| {
                    let comps = col
                        .components()
                        .iter()
                        .zip(tgt)
                        .map(|(f, &t)| if s - t == 1 { f.clone() } else { Polynomial::zero(f.ring()) })
                        .collect();
                    FreeModuleVector::new(comps, tgt.to_vec())
                })
                .collect()
        })
        .collect();
    Ok(GradedComplex { ring: cx.ring.clone(), shifts: cx.shifts.clone(), maps, i_max: cx.i_max, d_max: cx.d_max })
}

/// `dim_k H_i(complex)_d`.
pub fn homology_dims(complex: &GradedComplex, i: usize, d: i32) -> Result<usize> {
    complex.homology_dims(i, d)
}
