//! Gröbner bases of ideals and graded submodules of free modules over the
//! ambient polynomial ring, and the ideal/submodule operations built on them
//! (normal forms, colon ideals, syzygies in a quotient ring).
//!
//! Ideals are the rank-one case of the module engine. Pairs are processed
//! in increasing degree, which lets every caller stop at a degree bound and
//! still get a basis that is correct up to that degree.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};
use std::sync::Arc;

use crate::arith::{Monomial, MonomialOrder, PolyRing, Polynomial};
use crate::error::{Error, Result};
use crate::quotient::QuotientRing;

/// Reduced Gröbner basis of an ideal of the ambient polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
    reduced: bool,
    cached: Vec<MVec>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.generators.iter().any(|g| g.leading_monomial().is_some_and(|m| m.is_one()))
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().filter_map(|g| g.leading_monomial().cloned()).collect()
    }

    /// Remainder of `f` with no term divisible by a leading monomial.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.ring().order() != self.order() {
            return Err(Error::OrderMismatch);
        }
        if f.ring().p() != self.ring.p() {
            return Err(Error::ModulusMismatch(f.ring().p(), self.ring.p()));
        }
        if f.ring().nvars() != self.ring.nvars() {
            return Err(Error::VariableCountMismatch(f.ring().nvars(), self.ring.nvars()));
        }
        Ok(self.reduce(f))
    }

    /// Normal form without compatibility checks.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        let ctx = ModCtx::ideal(&self.ring);
        ctx.reduce(MVec::from_poly(f), &self.cached).into_poly(&self.ring)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.reduce(f).is_zero()
    }

    /// Whether every generator of `other` lies in this ideal.
    pub fn contains_ideal(&self, other: &GroebnerBasis) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens` in `ring`.
///
/// The result is monic, inter-reduced and sorted by increasing leading
/// monomial, so it does not depend on the order of the input.
pub fn buchberger(ring: &Arc<PolyRing>, gens: &[Polynomial]) -> GroebnerBasis {
    buchberger_truncated(ring, gens, None)
}

/// Same as [`buchberger`], but S-pairs above `max_degree` are skipped; the
/// result is a Gröbner basis of the ideal up to that degree.
pub fn buchberger_truncated(ring: &Arc<PolyRing>, gens: &[Polynomial], max_degree: Option<i32>) -> GroebnerBasis {
    let ctx = ModCtx::ideal(ring);
    let vecs = gens.iter().map(|g| MVec::from_poly(&g.rebase(ring))).collect();
    let basis = ctx.groebner(vecs, max_degree);
    GroebnerBasis {
        ring: ring.clone(),
        generators: basis.iter().cloned().map(|v| v.into_poly(ring)).collect(),
        reduced: true,
        cached: basis,
    }
}

/// Gröbner basis under another monomial order.
pub fn buchberger_with_order(gens: &[Polynomial], ring: &Arc<PolyRing>, order: MonomialOrder) -> Result<GroebnerBasis> {
    let target = PolyRing::new(ring.p(), ring.names().to_vec(), order)?;
    Ok(buchberger(&target, gens))
}

/// An element of a graded free module `⊕ R(-shift_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModuleVector {
    components: Vec<Polynomial>,
    shifts: Vec<i32>,
}

impl FreeModuleVector {
    pub fn new(components: Vec<Polynomial>, shifts: Vec<i32>) -> Self {
        assert_eq!(components.len(), shifts.len(), "one shift per component");
        FreeModuleVector { components, shifts }
    }

    pub fn zero(ring: &Arc<PolyRing>, shifts: Vec<i32>) -> Self {
        FreeModuleVector { components: vec![Polynomial::zero(ring); shifts.len()], shifts }
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Internal degree of the first nonzero term.
    pub fn degree(&self) -> Option<i32> {
        self.components
            .iter()
            .zip(&self.shifts)
            .find_map(|(c, s)| c.degree().map(|d| d as i32 + s))
    }

    pub fn is_homogeneous(&self) -> bool {
        let Some(d) = self.degree() else { return true };
        self.components
            .iter()
            .zip(&self.shifts)
            .all(|(c, s)| c.terms().iter().all(|t| t.1.degree() as i32 + s == d))
    }

    pub fn map_components(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        FreeModuleVector { components: self.components.iter().map(f).collect(), shifts: self.shifts.clone() }
    }
}

/// Gröbner basis of a graded submodule of `⊕ S(-shift_k)` over the ambient
/// polynomial ring `S`, in a term-over-position order refined by degree.
#[derive(Clone, Debug)]
pub struct ModuleGroebnerBasis {
    ctx: ModCtx,
    basis: Vec<MVec>,
}

impl ModuleGroebnerBasis {
    pub fn new(ring: &Arc<PolyRing>, shifts: &[i32], gens: &[FreeModuleVector], max_degree: Option<i32>) -> Self {
        let ctx = ModCtx { ring: ring.clone(), kind: ModuleOrder::Top, shifts: shifts.to_vec() };
        let vecs = gens.iter().map(MVec::from_vector).collect();
        let basis = ctx.groebner(vecs, max_degree);
        ModuleGroebnerBasis { ctx, basis }
    }

    pub fn shifts(&self) -> &[i32] {
        &self.ctx.shifts
    }

    /// Leading monomials grouped by position.
    pub fn leading_monomials_by_position(&self) -> Vec<Vec<Monomial>> {
        let mut out = vec![Vec::new(); self.ctx.shifts.len()];
        for v in &self.basis {
            let t = &v.terms[0];
            out[t.pos].push(t.m.clone());
        }
        out
    }

    pub fn generators(&self) -> Vec<FreeModuleVector> {
        self.basis.iter().map(|v| v.to_vector(&self.ctx.ring, &self.ctx.shifts)).collect()
    }

    pub fn normal_form(&self, v: &FreeModuleVector) -> FreeModuleVector {
        self.ctx
            .reduce(MVec::from_vector(v), &self.basis)
            .to_vector(&self.ctx.ring, &self.ctx.shifts)
    }

    pub fn contains(&self, v: &FreeModuleVector) -> bool {
        self.ctx.reduce(MVec::from_vector(v), &self.basis).terms.is_empty()
    }
}

/// Homogeneous generators of `(J : I) = {f : f I ⊆ J}` in the quotient ring,
/// returned as the reduced Gröbner basis of its preimage in the ambient ring.
///
/// Computed by elimination: the colon is the last coordinate of the
/// syzygies of `(h_1, ..., h_s)` modulo `J` and the defining ideal.
pub fn colon_ideal(ring: &QuotientRing, j_gens: &[Polynomial], i_gens: &[Polynomial]) -> Result<GroebnerBasis> {
    let poly = ring.poly_ring();
    for g in j_gens.iter().chain(i_gens) {
        if !g.is_homogeneous() {
            return Err(Error::NonHomogeneous(g.to_string()));
        }
    }
    let defining = ring.defining_gb();
    let hs: Vec<Polynomial> = i_gens.iter().map(|h| defining.reduce(&h.rebase(poly))).filter(|h| !h.is_zero()).collect();
    let mut base: Vec<Polynomial> = defining.generators().to_vec();
    base.extend(j_gens.iter().map(|g| g.rebase(poly)));
    if hs.is_empty() {
        // colon by the zero ideal is the whole ring
        return Ok(buchberger(poly, &[Polynomial::constant(poly, 1)]));
    }
    let s = hs.len();
    let mut shifts: Vec<i32> = hs.iter().map(|h| -(h.degree().unwrap() as i32)).collect();
    shifts.push(0);
    let ctx = ModCtx { ring: poly.clone(), kind: ModuleOrder::Pot, shifts };
    let mut gens = Vec::new();
    let mut tagged = MVec { terms: Vec::new() };
    for (k, h) in hs.iter().enumerate() {
        tagged.terms.extend(h.terms().iter().map(|(c, m)| MTerm { c: *c, m: m.clone(), pos: k }));
    }
    tagged.terms.push(MTerm { c: 1, m: Monomial::one(poly.nvars()), pos: s });
    gens.push(tagged);
    for k in 0..s {
        for b in &base {
            if !b.is_zero() {
                gens.push(MVec::from_poly_at(b, k));
            }
        }
    }
    let gb = ctx.groebner(gens, None);
    let mut colon: Vec<Polynomial> = gb
        .iter()
        .filter(|v| v.terms[0].pos == s)
        .map(|v| {
            let terms = v.terms.iter().map(|t| (t.c, t.m.clone())).collect();
            Polynomial::from_sorted_terms(poly, terms)
        })
        .collect();
    colon.extend(defining.generators().iter().cloned());
    Ok(buchberger(poly, &colon))
}

/// Generators of the graded syzygy module of `vectors` over the quotient
/// ring, as elements of `⊕ R(-deg v_l)`. Components are reduced modulo the
/// defining ideal and the list is pruned to a minimal generating set.
pub fn syzygy_basis(ring: &QuotientRing, vectors: &[FreeModuleVector], max_degree: Option<i32>) -> Result<Vec<FreeModuleVector>> {
    let Some(first) = vectors.first() else { return Ok(Vec::new()) };
    let poly = ring.poly_ring();
    let target = first.shifts().to_vec();
    let mut src = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.shifts() != target.as_slice() {
            return Err(Error::InvalidArgument("vectors live in different free modules".into()));
        }
        if !v.is_homogeneous() {
            return Err(Error::NonHomogeneous(format!("{:?}", v.components().iter().map(|c| c.to_string()).collect::<Vec<_>>())));
        }
        src.push(v.degree().ok_or_else(|| Error::InvalidArgument("zero vector has no degree".into()))?);
    }
    let raw = raw_syzygies(poly, ring.defining_gb(), &target, vectors, &src, max_degree);
    let reduced: Vec<FreeModuleVector> = raw
        .into_iter()
        .map(|v| v.map_components(|c| ring.defining_gb().reduce(c)))
        .filter(|v| !v.is_zero())
        .collect();
    Ok(ring.minimal_generators(&src, &reduced))
}

/// Syzygies over `S` of the vectors together with the relations `g e_k`,
/// projected to the coordinates of the vectors.
pub(crate) fn raw_syzygies(
    poly: &Arc<PolyRing>,
    defining: &GroebnerBasis,
    target: &[i32],
    vectors: &[FreeModuleVector],
    src: &[i32],
    max_degree: Option<i32>,
) -> Vec<FreeModuleVector> {
    let r = target.len();
    let mut shifts = target.to_vec();
    shifts.extend_from_slice(src);
    let ctx = ModCtx { ring: poly.clone(), kind: ModuleOrder::Pot, shifts };
    let mut gens = Vec::new();
    for (l, v) in vectors.iter().enumerate() {
        let mut t = MVec::from_vector(v);
        t.terms.push(MTerm { c: 1, m: Monomial::one(poly.nvars()), pos: r + l });
        gens.push(t);
    }
    for k in 0..r {
        for g in defining.generators() {
            gens.push(MVec::from_poly_at(g, k));
        }
    }
    let gb = ctx.groebner(gens, max_degree);
    gb.into_iter()
        .filter(|v| v.terms[0].pos >= r)
        .map(|v| {
            let mut comps: Vec<Vec<(u32, Monomial)>> = vec![Vec::new(); src.len()];
            for t in v.terms {
                comps[t.pos - r].push((t.c, t.m));
            }
            FreeModuleVector::new(comps.into_iter().map(|ts| Polynomial::from_terms(poly, ts)).collect(), src.to_vec())
        })
        .collect()
}

// ---------------------------------------------------------------------------
// module engine

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ModuleOrder {
    /// position first (lower index is larger), then the monomial order
    Pot,
    /// shifted degree, then the monomial order, then position
    Top,
}

#[derive(Clone, Debug)]
pub(crate) struct ModCtx {
    ring: Arc<PolyRing>,
    kind: ModuleOrder,
    shifts: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MTerm {
    c: u32,
    m: Monomial,
    pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MVec {
    terms: Vec<MTerm>,
}

impl MVec {
    fn from_poly(f: &Polynomial) -> Self {
        Self::from_poly_at(f, 0)
    }

    fn from_poly_at(f: &Polynomial, pos: usize) -> Self {
        MVec { terms: f.terms().iter().map(|(c, m)| MTerm { c: *c, m: m.clone(), pos }).collect() }
    }

    /// Terms are sorted later by the owning context.
    fn from_vector(v: &FreeModuleVector) -> Self {
        let mut terms = Vec::new();
        for (k, c) in v.components().iter().enumerate() {
            terms.extend(c.terms().iter().map(|(a, m)| MTerm { c: *a, m: m.clone(), pos: k }));
        }
        MVec { terms }
    }

    fn into_poly(self, ring: &Arc<PolyRing>) -> Polynomial {
        Polynomial::from_sorted_terms(ring, self.terms.into_iter().map(|t| (t.c, t.m)).collect())
    }

    fn to_vector(&self, ring: &Arc<PolyRing>, shifts: &[i32]) -> FreeModuleVector {
        let mut comps: Vec<Vec<(u32, Monomial)>> = vec![Vec::new(); shifts.len()];
        for t in &self.terms {
            comps[t.pos].push((t.c, t.m.clone()));
        }
        FreeModuleVector::new(comps.into_iter().map(|ts| Polynomial::from_terms(ring, ts)).collect(), shifts.to_vec())
    }
}

impl ModCtx {
    fn ideal(ring: &Arc<PolyRing>) -> Self {
        ModCtx { ring: ring.clone(), kind: ModuleOrder::Pot, shifts: vec![0] }
    }

    #[inline]
    fn cmp(&self, a: &MTerm, b: &MTerm) -> Ordering {
        let ord = self.ring.order();
        match self.kind {
            ModuleOrder::Pot => b.pos.cmp(&a.pos).then_with(|| ord.cmp(&a.m, &b.m)),
            ModuleOrder::Top => {
                let da = a.m.degree() as i32 + self.shifts[a.pos];
                let db = b.m.degree() as i32 + self.shifts[b.pos];
                da.cmp(&db).then_with(|| ord.cmp(&a.m, &b.m)).then_with(|| b.pos.cmp(&a.pos))
            }
        }
    }

    fn normalize(&self, mut v: MVec) -> MVec {
        let f = self.ring.field();
        v.terms.sort_by(|a, b| self.cmp(b, a));
        let mut out: Vec<MTerm> = Vec::with_capacity(v.terms.len());
        for t in v.terms {
            match out.last_mut() {
                Some(last) if last.pos == t.pos && last.m == t.m => last.c = f.add(last.c, t.c),
                _ => out.push(t),
            }
        }
        out.retain(|t| t.c != 0);
        MVec { terms: out }
    }

    fn degree(&self, v: &MVec) -> i32 {
        let t = &v.terms[0];
        t.m.degree() as i32 + self.shifts[t.pos]
    }

    /// `a + c * mono * b`
    fn add_scaled(&self, a: &MVec, b: &MVec, c: u32, mono: &Monomial) -> MVec {
        let f = self.ring.field();
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut i = 0;
        let mut j = 0;
        let bt: Vec<MTerm> = b
            .terms
            .iter()
            .map(|t| MTerm { c: f.mul(t.c, c), m: t.m.mul(mono), pos: t.pos })
            .collect();
        while i < a.terms.len() || j < bt.len() {
            if j == bt.len() {
                out.push(a.terms[i].clone());
                i += 1;
            } else if i == a.terms.len() {
                out.push(bt[j].clone());
                j += 1;
            } else {
                match self.cmp(&a.terms[i], &bt[j]) {
                    Ordering::Greater => {
                        out.push(a.terms[i].clone());
                        i += 1;
                    }
                    Ordering::Less => {
                        out.push(bt[j].clone());
                        j += 1;
                    }
                    Ordering::Equal => {
                        let s = f.add(a.terms[i].c, bt[j].c);
                        if s != 0 {
                            out.push(MTerm { c: s, m: a.terms[i].m.clone(), pos: a.terms[i].pos });
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        MVec { terms: out }
    }

    fn find_divisor<'a>(&self, t: &MTerm, basis: &'a [MVec]) -> Option<&'a MVec> {
        basis.iter().find(|g| {
            let l = &g.terms[0];
            l.pos == t.pos && l.m.divides(&t.m)
        })
    }

    /// Full reduction (leading and tail terms).
    fn reduce(&self, v: MVec, basis: &[MVec]) -> MVec {
        let f = self.ring.field();
        let mut p = self.normalize(v);
        let mut rem: Vec<MTerm> = Vec::new();
        // every term of `rem` is larger than every term of `p`
        while let Some(t) = p.terms.first().cloned() {
            match self.find_divisor(&t, basis) {
                Some(g) => {
                    let l = &g.terms[0];
                    let q = l.m.quotient_of(&t.m).unwrap();
                    let c = f.neg(f.mul(t.c, f.inv(l.c)));
                    p = self.add_scaled(&p, g, c, &q);
                }
                None => rem.push(p.terms.remove(0)),
            }
        }
        MVec { terms: rem }
    }

    fn make_monic(&self, v: &mut MVec) {
        let f = self.ring.field();
        if let Some(t) = v.terms.first() {
            let inv = f.inv(t.c);
            for t in v.terms.iter_mut() {
                t.c = f.mul(t.c, inv);
            }
        }
    }

    fn s_poly(&self, a: &MVec, b: &MVec) -> MVec {
        let f = self.ring.field();
        let la = &a.terms[0];
        let lb = &b.terms[0];
        let l = la.m.lcm(&lb.m);
        let qa = la.m.quotient_of(&l).unwrap();
        let qb = lb.m.quotient_of(&l).unwrap();
        let za = MVec { terms: Vec::new() };
        let first = self.add_scaled(&za, a, f.inv(la.c), &qa);
        self.add_scaled(&first, b, f.neg(f.inv(lb.c)), &qb)
    }

    /// Reduced Gröbner basis, processing S-pairs and inputs degree by degree.
    fn groebner(&self, input: Vec<MVec>, max_degree: Option<i32>) -> Vec<MVec> {
        enum Item {
            Input(MVec),
            Pair(usize, usize),
        }
        let single_position = self.shifts.len() == 1;
        let mut items: Vec<Option<Item>> = Vec::new();
        let mut heap: BinaryHeap<Reverse<(i32, usize)>> = BinaryHeap::new();
        for v in input {
            let v = self.normalize(v);
            if v.terms.is_empty() {
                continue;
            }
            let d = self.degree(&v);
            heap.push(Reverse((d, items.len())));
            items.push(Some(Item::Input(v)));
        }
        let mut basis: Vec<MVec> = Vec::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        while let Some(Reverse((d, idx))) = heap.pop() {
            if max_degree.is_some_and(|m| d > m) {
                continue;
            }
            let item = items[idx].take().unwrap();
            let candidate = match item {
                Item::Input(v) => v,
                Item::Pair(i, j) => {
                    pending.remove(&(i, j));
                    let l = basis[i].terms[0].m.lcm(&basis[j].terms[0].m);
                    let pos = basis[i].terms[0].pos;
                    let chain = (0..basis.len()).any(|k| {
                        k != i
                            && k != j
                            && basis[k].terms[0].pos == pos
                            && basis[k].terms[0].m.divides(&l)
                            && !pending.contains(&(i.min(k), i.max(k)))
                            && !pending.contains(&(j.min(k), j.max(k)))
                    });
                    if chain {
                        continue;
                    }
                    self.s_poly(&basis[i], &basis[j])
                }
            };
            let mut r = self.reduce(candidate, &basis);
            if r.terms.is_empty() {
                continue;
            }
            self.make_monic(&mut r);
            let t = basis.len();
            let lt = r.terms[0].clone();
            for (i, g) in basis.iter().enumerate() {
                let lg = &g.terms[0];
                if lg.pos != lt.pos {
                    continue;
                }
                if single_position && lg.m.is_coprime(&lt.m) {
                    continue;
                }
                let l = lg.m.lcm(&lt.m);
                let deg = l.degree() as i32 + self.shifts[lt.pos];
                pending.insert((i, t));
                heap.push(Reverse((deg, items.len())));
                items.push(Some(Item::Pair(i, t)));
            }
            basis.push(r);
        }
        self.interreduce(basis)
    }

    fn interreduce(&self, basis: Vec<MVec>) -> Vec<MVec> {
        // drop elements whose leading term is divisible by another's
        let mut minimal: Vec<MVec> = Vec::new();
        for (i, g) in basis.iter().enumerate() {
            let lg = &g.terms[0];
            let redundant = basis.iter().enumerate().any(|(j, h)| {
                let lh = &h.terms[0];
                j != i && lh.pos == lg.pos && lh.m.divides(&lg.m) && (lh.m != lg.m || j < i)
            });
            if !redundant {
                minimal.push(g.clone());
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<MVec> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let head = MVec { terms: vec![minimal[i].terms[0].clone()] };
            let tail = MVec { terms: minimal[i].terms[1..].to_vec() };
            let tail = self.reduce(tail, &others);
            let mut g = head;
            g.terms.extend(tail.terms);
            self.make_monic(&mut g);
            out.push(g);
        }
        out.sort_by(|a, b| self.cmp(&a.terms[0], &b.terms[0]));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::QuotientRing;

    fn ring(p: u32, n: usize) -> Arc<PolyRing> {
        let names = ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect();
        PolyRing::new(p, names, MonomialOrder::DegRevLex).unwrap()
    }

    fn poly(r: &Arc<PolyRing>, terms: &[(i64, &[u16])]) -> Polynomial {
        Polynomial::from_terms(
            r,
            terms.iter().map(|(c, e)| (r.field().from_i64(*c), Monomial::new(e.to_vec()))).collect(),
        )
    }

    #[test]
    fn principal_monomial_ideal() {
        let r = ring(32003, 2);
        let x = Polynomial::var(&r, 0);
        let gb = buchberger(&r, std::slice::from_ref(&x));
        assert_eq!(gb.generators(), &[x]);
        assert!(gb.is_reduced());
    }

    #[test]
    fn monomial_set_is_its_own_basis() {
        let r = ring(32003, 3);
        let gens = vec![
            poly(&r, &[(1, &[2, 0, 0])]),
            poly(&r, &[(1, &[1, 1, 0])]),
            poly(&r, &[(1, &[0, 1, 1])]),
            poly(&r, &[(1, &[0, 0, 2])]),
        ];
        let gb = buchberger(&r, &gens);
        let mut got: Vec<String> = gb.generators().iter().map(|g| g.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x*y", "x^2", "y*z", "z^2"]);
    }

    #[test]
    fn s_pair_produces_cubic() {
        let r = ring(32003, 2);
        let f = poly(&r, &[(1, &[2, 0]), (-1, &[0, 2])]);
        let g = poly(&r, &[(1, &[1, 1])]);
        let gb = buchberger(&r, &[f.clone(), g.clone()]);
        let got: Vec<String> = gb.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(got, vec!["x*y", "x^2 - y^2", "y^3"]);
        // S(f, g) = y f - x g = -y^3, and y^3 must reduce to 0
        let s = f.mul_monomial(1, &Monomial::new(vec![0, 1])).try_sub(&g.mul_monomial(1, &Monomial::new(vec![1, 0]))).unwrap();
        assert_eq!(s.to_string(), "-y^3");
        assert!(gb.contains(&s));
    }

    #[test]
    fn normal_forms() {
        let r = ring(32003, 3);
        let gens = vec![
            poly(&r, &[(1, &[2, 0, 0])]),
            poly(&r, &[(1, &[1, 1, 0])]),
            poly(&r, &[(1, &[0, 1, 1])]),
            poly(&r, &[(1, &[0, 0, 2])]),
        ];
        let gb = buchberger(&r, &gens);
        assert!(gb.normal_form(&gens[0]).unwrap().is_zero());
        let xz = poly(&r, &[(1, &[1, 0, 1])]);
        assert_eq!(gb.normal_form(&xz).unwrap(), xz);
        assert!(gb.normal_form(&Polynomial::zero(&r)).unwrap().is_zero());
        let lex = PolyRing::new(32003, r.names().to_vec(), MonomialOrder::Lex).unwrap();
        assert_eq!(gb.normal_form(&Polynomial::var(&lex, 0)), Err(Error::OrderMismatch));
    }

    #[test]
    fn permutation_invariance() {
        let r = ring(7, 3);
        let gens = vec![
            poly(&r, &[(1, &[2, 0, 0]), (3, &[0, 1, 1])]),
            poly(&r, &[(1, &[1, 1, 0]), (-1, &[0, 0, 2])]),
            poly(&r, &[(2, &[0, 2, 0]), (1, &[1, 0, 1])]),
        ];
        let a = buchberger(&r, &gens);
        let mut rev = gens.clone();
        rev.reverse();
        assert_eq!(a, buchberger(&r, &rev));
        let rotated = vec![gens[1].clone(), gens[2].clone(), gens[0].clone()];
        assert_eq!(a, buchberger(&r, &rotated));
    }

    #[test]
    fn lex_basis_eliminates() {
        let r = ring(32003, 2);
        let f = poly(&r, &[(1, &[2, 0]), (-1, &[0, 2])]);
        let g = poly(&r, &[(1, &[1, 1])]);
        let gb = buchberger_with_order(&[f, g], &r, MonomialOrder::Lex).unwrap();
        assert!(gb.generators().iter().any(|h| h.to_string() == "y^3"));
    }

    fn qring(p: u32, n: usize, gens: &[&[(i64, &[u16])]]) -> QuotientRing {
        let r = ring(p, n);
        let g: Vec<Polynomial> = gens.iter().map(|t| poly(&r, t)).collect();
        QuotientRing::new(p, r.names().to_vec(), g).unwrap()
    }

    #[test]
    fn colon_examples() {
        let ci2 = qring(5, 2, &[&[(1, &[2, 0])], &[(1, &[0, 2])]]);
        let r = ci2.poly_ring().clone();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let c = colon_ideal(&ci2, &[], std::slice::from_ref(&x)).unwrap();
        assert_eq!(c, ci2.ideal(std::slice::from_ref(&x)));
        assert!(!c.contains(&y));

        let crv = qring(32003, 3, &[&[(1, &[2, 0, 0])], &[(1, &[1, 1, 0])], &[(1, &[0, 1, 1])], &[(1, &[0, 0, 2])]]);
        let r = crv.poly_ring().clone();
        let (x, y, z) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1), Polynomial::var(&r, 2));
        let c = colon_ideal(&crv, std::slice::from_ref(&x), std::slice::from_ref(&y)).unwrap();
        assert_eq!(c, crv.ideal(&[x.clone(), z.clone()]));
        // colon by the unit ideal
        let one = Polynomial::constant(&r, 1);
        assert_eq!(colon_ideal(&crv, std::slice::from_ref(&x), &[one]).unwrap(), crv.ideal(std::slice::from_ref(&x)));
        let bad = x.try_add(&y.mul_unchecked(&y)).unwrap();
        assert!(matches!(colon_ideal(&crv, &[bad], &[y]), Err(Error::NonHomogeneous(_))));
    }

    #[test]
    fn syzygy_examples() {
        let s = qring(32003, 2, &[]);
        let r = s.poly_ring().clone();
        let (x, y) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1));
        let v = |a: &Polynomial| FreeModuleVector::new(vec![a.clone()], vec![0]);
        let syz = syzygy_basis(&s, &[v(&x), v(&y)], None).unwrap();
        assert_eq!(syz.len(), 1);
        let comps: Vec<String> = syz[0].components().iter().map(|c| c.to_string()).collect();
        assert!(comps == vec!["y", "-x"] || comps == vec!["-y", "x"], "{comps:?}");

        let ci2 = qring(32003, 2, &[&[(1, &[2, 0])], &[(1, &[0, 2])]]);
        let r = ci2.poly_ring().clone();
        let (x, y) = (Polynomial::var(&r, 0), Polynomial::var(&r, 1));
        let syz = syzygy_basis(&ci2, &[v(&x), v(&y)], None).unwrap();
        assert_eq!(syz.len(), 3);
        assert!(syz.iter().all(|s| s.degree() == Some(2)));
        for s in &syz {
            let pairing = s.components()[0].mul_unchecked(&x).try_add(&s.components()[1].mul_unchecked(&y)).unwrap();
            assert!(ci2.defining_gb().contains(&pairing));
        }

        let ry = qring(32003, 2, &[&[(1, &[0, 2])]]);
        let r = ry.poly_ring().clone();
        let x = Polynomial::var(&r, 0);
        assert!(syzygy_basis(&ry, &[v(&x)], None).unwrap().is_empty());
    }
}
