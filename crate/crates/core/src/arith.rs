//! Exact arithmetic over prime fields: scalars, monomials, monomial orders
//! and sparse polynomials in a fixed ambient ring.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default characteristic used by fixtures that do not need a small field.
pub const DEFAULT_CHAR: u32 = 32003;

/// Deterministic primality test, sufficient for moduli below 2^31.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Arithmetic context for `F_p`; elements are canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p as u64) || p >= (1 << 31) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// Symmetric representative in `(-p/2, p/2]`, used for printing.
    pub fn signed(&self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// A field element that carries its modulus, for the checked public API.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldScalar {
    value: u32,
    p: u32,
}

impl FieldScalar {
    pub fn new(value: i64, p: u32) -> Result<Self> {
        let field = PrimeField::new(p)?;
        Ok(FieldScalar { value: field.from_i64(value), p })
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn field_with(&self, other: &FieldScalar) -> Result<PrimeField> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(PrimeField { p: self.p })
    }

    pub fn checked_add(&self, other: &FieldScalar) -> Result<FieldScalar> {
        let f = self.field_with(other)?;
        Ok(FieldScalar { value: f.add(self.value, other.value), p: self.p })
    }

    pub fn checked_mul(&self, other: &FieldScalar) -> Result<FieldScalar> {
        let f = self.field_with(other)?;
        Ok(FieldScalar { value: f.mul(self.value, other.value), p: self.p })
    }

    pub fn inverse(&self) -> Option<FieldScalar> {
        (self.value != 0).then(|| FieldScalar {
            value: PrimeField { p: self.p }.inv(self.value),
            p: self.p,
        })
    }
}

/// Dense exponent vector with cached total degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: Vec<u16>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars], degree: 0 }
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u16> = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, degree: self.degree + other.degree }
    }

    pub fn mul_var(&self, v: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[v] += 1;
        Monomial { exps, degree: self.degree + 1 }
    }

    /// `self | other`
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial::new(other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// All monomials of total degree `d` in `n` variables, in descending lex order.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Monomial> {
        fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
            if i + 1 == n {
                cur[i] = left as u16;
                out.push(Monomial::new(cur.clone()));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e as u16;
                rec(n, i + 1, left - e, cur, out);
            }
            cur[i] = 0;
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(n, 0, d, &mut vec![0; n], &mut out);
        out
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        parts.join("*")
    }
}

/// Monomial orders. Degree-reverse-lexicographic is the default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
}

impl MonomialOrder {
    /// Unchecked comparison; both monomials must have the same length.
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => match a.degree.cmp(&b.degree) {
                Ordering::Equal => {
                    for (x, y) in a.exps.iter().zip(&b.exps).rev() {
                        if x != y {
                            // smaller exponent in the last differing slot wins
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                }
                o => o,
            },
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
        }
    }
}

/// Checked comparison of two monomials under `ord`.
pub fn compare_monomials(a: &Monomial, b: &Monomial, ord: MonomialOrder) -> Result<Ordering> {
    if a.nvars() != b.nvars() {
        return Err(Error::VariableCountMismatch(a.nvars(), b.nvars()));
    }
    Ok(ord.cmp(a, b))
}

/// The ambient polynomial ring `F_p[x_1..x_n]` with a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: PrimeField,
    names: Vec<String>,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(p: u32, names: Vec<String>, order: MonomialOrder) -> Result<Arc<Self>> {
        Ok(Arc::new(PolyRing { field: PrimeField::new(p)?, names, order }))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A polynomial as a list of `(coefficient, monomial)` pairs, strictly
/// descending under the ring's order, without zero coefficients.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(u32, Monomial)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: i64) -> Self {
        let c = ring.field.from_i64(c);
        let terms = if c == 0 { vec![] } else { vec![(c, Monomial::one(ring.nvars()))] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Polynomial { ring: ring.clone(), terms: vec![(1, Monomial::var(i, ring.nvars()))] }
    }

    pub fn monomial(ring: &Arc<PolyRing>, c: u32, m: Monomial) -> Self {
        Self::from_terms(ring, vec![(c, m)])
    }

    /// Builds a polynomial from arbitrary terms: coefficients are reduced,
    /// like terms combined and the result sorted.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(u32, Monomial)>) -> Self {
        let f = ring.field;
        let ord = ring.order;
        terms.sort_by(|a, b| ord.cmp(&b.1, &a.1));
        let mut out: Vec<(u32, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            let c = c % f.p;
            match out.last_mut() {
                Some(last) if last.1 == m => last.0 = f.add(last.0, c),
                _ => out.push((c, m)),
            }
        }
        out.retain(|t| t.0 != 0);
        Polynomial { ring: ring.clone(), terms: out }
    }

    /// Linear form `sum c_i x_i` from a coefficient vector.
    pub fn linear_form(ring: &Arc<PolyRing>, coeffs: &[u32]) -> Self {
        let n = ring.nvars();
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c % ring.p() != 0)
            .map(|(i, &c)| (c, Monomial::var(i, n)))
            .collect();
        Self::from_terms(ring, terms)
    }

    pub(crate) fn from_sorted_terms(ring: &Arc<PolyRing>, terms: Vec<(u32, Monomial)>) -> Self {
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(u32, Monomial)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(u32, Monomial)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&(u32, Monomial)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree of the leading term (for homogeneous input, the degree).
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.1.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((_, m)) => self.terms.iter().all(|t| t.1.degree() == m.degree()),
        }
    }

    /// First term whose degree differs from the leading term's, if any.
    pub fn inhomogeneous_term(&self) -> Option<&(u32, Monomial)> {
        let d = self.terms.first()?.1.degree();
        self.terms.iter().find(|t| t.1.degree() != d)
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if self.ring.p() != other.ring.p() {
            return Err(Error::ModulusMismatch(self.ring.p(), other.ring.p()));
        }
        if self.ring.nvars() != other.ring.nvars() {
            return Err(Error::VariableCountMismatch(self.ring.nvars(), other.ring.nvars()));
        }
        if self.ring.order != other.ring.order {
            return Err(Error::OrderMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Ok(self.add_scaled(other, 1, None))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Ok(self.add_scaled(other, self.ring.field.neg(1 % self.ring.p()), None))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_scale(&self, c: &FieldScalar) -> Result<Polynomial> {
        if c.modulus() != self.ring.p() {
            return Err(Error::ModulusMismatch(self.ring.p(), c.modulus()));
        }
        Ok(self.scale(c.value()))
    }

    /// `self + c * mono * other` by a sorted merge.
    pub fn add_scaled(&self, other: &Polynomial, c: u32, mono: Option<&Monomial>) -> Polynomial {
        let f = self.ring.field;
        let ord = self.ring.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let shifted: Vec<(u32, Monomial)> = other
            .terms
            .iter()
            .map(|(k, m)| (f.mul(*k, c), mono.map_or_else(|| m.clone(), |u| u.mul(m))))
            .filter(|t| t.0 != 0)
            .collect();
        let mut b = shifted.into_iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match ord.cmp(&x.1, &y.1) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let s = f.add(x.0, y.0);
                        let m = x.1.clone();
                        a.next();
                        b.next();
                        if s != 0 {
                            out.push((s, m));
                        }
                    }
                },
            }
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let f = self.ring.field;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, m) in &self.terms {
            for (b, n) in &other.terms {
                terms.push((f.mul(*a, *b), m.mul(n)));
            }
        }
        Self::from_terms(&self.ring, terms)
    }

    pub fn mul_monomial(&self, c: u32, m: &Monomial) -> Polynomial {
        let f = self.ring.field;
        if c.is_multiple_of(f.p) {
            return Polynomial::zero(&self.ring);
        }
        // multiplication by a monomial preserves the order
        let terms = self.terms.iter().map(|(k, n)| (f.mul(*k, c), n.mul(m))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.ring.field;
        let c = c % f.p;
        if c == 0 {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(k, m)| (f.mul(*k, c), m.clone())).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.ring.field.neg(1 % self.ring.p()))
    }

    pub fn make_monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((c, _)) => self.scale(self.ring.field.inv(*c)),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::constant(&self.ring, 1);
        for _ in 0..e {
            r = r.mul_unchecked(self);
        }
        r
    }

    /// Degree-by-degree decomposition; the components sum to `self`.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, Polynomial> {
        let mut parts: BTreeMap<u32, Vec<(u32, Monomial)>> = BTreeMap::new();
        for t in &self.terms {
            parts.entry(t.1.degree()).or_default().push(t.clone());
        }
        parts
            .into_iter()
            .map(|(d, ts)| (d, Polynomial { ring: self.ring.clone(), terms: ts }))
            .collect()
    }

    /// The degree-`d` homogeneous component.
    pub fn component(&self, d: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|t| t.1.degree() == d).cloned().collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Coefficient vector of the linear part, one slot per variable.
    pub fn linear_coefficients(&self) -> Vec<u32> {
        let mut v = vec![0; self.ring.nvars()];
        for (c, m) in &self.terms {
            if m.degree() == 1 {
                let i = m.exps().iter().position(|&e| e == 1).unwrap();
                v[i] = *c;
            }
        }
        v
    }

    /// Substitutes `images[i]` for the i-th variable; all images must live in `target`.
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Polynomial]) -> Polynomial {
        let mut acc = Polynomial::zero(target);
        for (c, m) in &self.terms {
            let mut t = Polynomial::constant(target, *c as i64);
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul_unchecked(&images[i].pow(e as u32));
                }
            }
            acc = acc.add_scaled(&t, 1, None);
        }
        acc
    }

    /// Reinterprets the polynomial in another ring with the same variables
    /// (used after parsing, before the final ring is known).
    pub fn rebase(&self, ring: &Arc<PolyRing>) -> Polynomial {
        let terms = self.terms.iter().map(|(c, m)| (c % ring.p(), m.clone())).collect();
        Polynomial::from_terms(ring, terms)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.ring.field;
        for (k, (c, m)) in self.terms.iter().enumerate() {
            let s = field.signed(*c);
            let (sign, mag) = if s < 0 { ("-", -s) } else { ("+", s) };
            if k == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else if mag == 1 {
                write!(f, "{}", m.fmt_with(&self.ring.names))?;
            } else {
                write!(f, "{}*{}", mag, m.fmt_with(&self.ring.names))?;
            }
        }
        Ok(())
    }
}

/// Operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

/// Checked polynomial arithmetic in one ambient ring.
pub fn poly_arith(op: PolyOp, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    match op {
        PolyOp::Add => f.try_add(g),
        PolyOp::Mul => f.try_mul(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, n: usize) -> Arc<PolyRing> {
        let names = ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect();
        PolyRing::new(p, names, MonomialOrder::DegRevLex).unwrap()
    }

    fn mono(e: &[u16]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn cancellation() {
        let r = ring(5, 2);
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let s = x.try_add(&y).unwrap().try_add(&y.neg()).unwrap();
        assert_eq!(s, x);
    }

    #[test]
    fn square_of_binomial() {
        let r = ring(5, 2);
        let xy = Polynomial::var(&r, 0).try_add(&Polynomial::var(&r, 1)).unwrap();
        let sq = poly_arith(PolyOp::Mul, &xy, &xy).unwrap();
        assert_eq!(sq.to_string(), "x^2 + 2*x*y + y^2");

        let r2 = ring(2, 2);
        let xy = Polynomial::var(&r2, 0).try_add(&Polynomial::var(&r2, 1)).unwrap();
        let sq = xy.try_mul(&xy).unwrap();
        // direct expansion mod 2: the cross term 2xy vanishes
        let expect = Polynomial::from_terms(&r2, vec![(1, mono(&[2, 0])), (1, mono(&[0, 2]))]);
        assert_eq!(sq, expect);
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = Polynomial::var(&ring(5, 2), 0);
        let b = Polynomial::var(&ring(7, 2), 0);
        assert_eq!(a.try_add(&b), Err(Error::ModulusMismatch(5, 7)));
        let c = Polynomial::var(&ring(5, 3), 0);
        assert_eq!(a.try_mul(&c), Err(Error::VariableCountMismatch(2, 3)));
        let s = FieldScalar::new(2, 7).unwrap();
        assert!(a.try_scale(&s).is_err());
    }

    #[test]
    fn degrevlex_examples() {
        let o = MonomialOrder::DegRevLex;
        assert_eq!(compare_monomials(&mono(&[2, 0]), &mono(&[1, 1]), o).unwrap(), Ordering::Greater);
        // xz vs y^2: rightmost differing slot is z; xz has the larger exponent there
        assert_eq!(compare_monomials(&mono(&[1, 0, 1]), &mono(&[0, 2, 0]), o).unwrap(), Ordering::Less);
        let m = mono(&[1, 2, 3]);
        assert_eq!(compare_monomials(&m, &m, o).unwrap(), Ordering::Equal);
        assert!(compare_monomials(&mono(&[1]), &mono(&[1, 0]), o).is_err());
    }

    #[test]
    fn degrevlex_matches_brute_definition() {
        // independent definition: compare degree, then the reversed, negated exponent vectors lexicographically
        let brute = |a: &Monomial, b: &Monomial| {
            a.degree().cmp(&b.degree()).then_with(|| {
                let ra: Vec<i32> = a.exps().iter().rev().map(|&e| -(e as i32)).collect();
                let rb: Vec<i32> = b.exps().iter().rev().map(|&e| -(e as i32)).collect();
                ra.cmp(&rb)
            })
        };
        let mons: Vec<Monomial> = (0..=4).flat_map(|d| Monomial::all_of_degree(3, d)).collect();
        for a in &mons {
            for b in &mons {
                assert_eq!(MonomialOrder::DegRevLex.cmp(a, b), brute(a, b));
            }
        }
    }

    #[test]
    fn orders_are_total_orders() {
        for n in 1..=3 {
            let mons: Vec<Monomial> = (0..=4).flat_map(|d| Monomial::all_of_degree(n, d)).collect();
            for ord in [MonomialOrder::DegRevLex, MonomialOrder::Lex] {
                for a in &mons {
                    for b in &mons {
                        let ab = ord.cmp(a, b);
                        assert_eq!(ab, ord.cmp(b, a).reverse());
                        assert_eq!(ab == Ordering::Equal, a == b);
                        if ord == MonomialOrder::DegRevLex && a.degree() > b.degree() {
                            assert_eq!(ab, Ordering::Greater);
                        }
                        for c in &mons {
                            if ab == Ordering::Greater && ord.cmp(b, c) == Ordering::Greater {
                                assert_eq!(ord.cmp(a, c), Ordering::Greater);
                            }
                        }
                        // multiplicative
                        let x = Monomial::var(0, n);
                        assert_eq!(ord.cmp(&a.mul(&x), &b.mul(&x)), ab);
                    }
                }
            }
        }
    }

    #[test]
    fn homogeneous_split() {
        let r = ring(5, 2);
        let f = Polynomial::from_terms(&r, vec![(1, mono(&[1, 0])), (1, mono(&[1, 1]))]);
        let parts = f.homogeneous_components();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&1], Polynomial::var(&r, 0));
        assert_eq!(parts[&2].to_string(), "x*y");
        assert!(Polynomial::zero(&r).homogeneous_components().is_empty());
        let r3 = ring(5, 3);
        let l = Polynomial::linear_form(&r3, &[1, 1, 1]);
        let parts = l.homogeneous_components();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[&1], l);
    }

    #[test]
    fn all_of_degree_counts() {
        assert_eq!(Monomial::all_of_degree(3, 2).len(), 6);
        assert_eq!(Monomial::all_of_degree(0, 0).len(), 1);
        assert!(Monomial::all_of_degree(0, 1).is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = Vec<(u32, [u16; 3])>> {
            prop::collection::vec((0u32..7, [0u16..3, 0u16..3, 0u16..3]), 0..6)
        }

        fn build(r: &Arc<PolyRing>, t: Vec<(u32, [u16; 3])>) -> Polynomial {
            Polynomial::from_terms(r, t.into_iter().map(|(c, e)| (c, Monomial::new(e.to_vec()))).collect())
        }

        proptest! {
            #![proptest_config(ProptestConfig { cases: 64, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]
            #[test]
            fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
                let r = ring(7, 3);
                let (a, b, c) = (build(&r, a), build(&r, b), build(&r, c));
                prop_assert_eq!(a.mul_unchecked(&b).mul_unchecked(&c), a.mul_unchecked(&b.mul_unchecked(&c)));
                prop_assert_eq!(a.mul_unchecked(&b.try_add(&c).unwrap()),
                    a.mul_unchecked(&b).try_add(&a.mul_unchecked(&c)).unwrap());
                prop_assert_eq!(a.try_add(&b).unwrap(), b.try_add(&a).unwrap());
                prop_assert!(a.try_sub(&a).unwrap().is_zero());
            }
        }
    }
}
