//! Property tests over seeded inputs. The oracles here work in the
//! polynomial ring by plain linear algebra and never consult the quotient
//! tables or Gröbner bases under test.

use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::RngAlgorithm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use koszulkit::arith::{Monomial, MonomialOrder, PolyRing, Polynomial};
use koszulkit::cli::{module_block, parse_input, InputDocument};
use koszulkit::corpus::{build_fixture, random_module, Fixture, FIXTURE_NAMES};
use koszulkit::filtration::{
    all_linear_ideals_filtration, check_conca_generator, conca_flag, minimal_multiplicity_flag, subsets_filtration, verify_groebner_flag,
    verify_koszul_filtration, LinearIdeal, DEFAULT_SUBSPACE_BUDGET,
};
use koszulkit::groebner::{buchberger, colon_ideal, syzygy_basis, FreeModuleVector};
use koszulkit::koszul::residue_field_identity;
use koszulkit::linalg::rank;
use koszulkit::quotient::{GradedModule, QuotientRing};
use koszulkit::resolution::{betti_table, resolve};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_algorithm: RngAlgorithm::ChaCha, failure_persistence: None, ..ProptestConfig::default() }
}

fn fixtures() -> Vec<Fixture> {
    FIXTURE_NAMES.iter().map(|n| build_fixture(n).unwrap()).collect()
}

fn fixture(k: usize) -> Fixture {
    build_fixture(FIXTURE_NAMES[k % FIXTURE_NAMES.len()]).unwrap()
}

/// Coordinates of degree-`d` polynomials over the monomials of `S_d`.
struct Coords {
    index: HashMap<Monomial, usize>,
    len: usize,
}

impl Coords {
    fn new(n: usize, d: i32) -> Self {
        let monos = if d < 0 { Vec::new() } else { Monomial::all_of_degree(n, d as u32) };
        let len = monos.len();
        Coords { index: monos.into_iter().enumerate().map(|(i, m)| (m, i)).collect(), len }
    }

    fn of(&self, f: &Polynomial, out: &mut [u32]) {
        for (c, m) in f.terms() {
            out[self.index[m]] = *c;
        }
    }
}

fn monomials(n: usize, d: i32) -> Vec<Monomial> {
    if d < 0 {
        Vec::new()
    } else {
        Monomial::all_of_degree(n, d as u32)
    }
}

/// `dim_k (S^r / (columns + I S^r))_d`, with `I` the defining ideal.
fn cokernel_dim(ring: &QuotientRing, shifts: &[i32], columns: &[FreeModuleVector], d: i32) -> usize {
    let n = ring.nvars();
    let blocks: Vec<Coords> = shifts.iter().map(|&s| Coords::new(n, d - s)).collect();
    let total: usize = blocks.iter().map(|b| b.len).sum();
    let offsets: Vec<usize> = blocks.iter().scan(0, |acc, b| {
        let o = *acc;
        *acc += b.len;
        Some(o)
    }).collect();
    let mut rows = Vec::new();
    let mut push = |comps: Vec<Polynomial>| {
        let mut v = vec![0u32; total];
        for (k, f) in comps.iter().enumerate() {
            blocks[k].of(f, &mut v[offsets[k]..offsets[k] + blocks[k].len]);
        }
        rows.push(v);
    };
    for c in columns {
        let Some(e) = c.degree() else { continue };
        for m in monomials(n, d - e) {
            push(c.components().iter().map(|f| f.mul_monomial(1, &m)).collect());
        }
    }
    for (k, &s) in shifts.iter().enumerate() {
        for g in ring.generators() {
            for m in monomials(n, d - s - g.degree().unwrap() as i32) {
                let mut comps = vec![Polynomial::zero(ring.poly_ring()); shifts.len()];
                comps[k] = g.mul_monomial(1, &m);
                push(comps);
            }
        }
    }
    total - rank(ring.field(), &rows)
}

fn random_linear(ring: &QuotientRing, rng: &mut ChaCha8Rng) -> Polynomial {
    loop {
        let v: Vec<u32> = (0..ring.nvars()).map(|_| rng.gen_range(0..ring.p())).collect();
        if v.iter().any(|&c| c != 0) {
            return ring.linear_form(&v);
        }
    }
}

fn random_form(poly: &Arc<PolyRing>, d: u32, rng: &mut ChaCha8Rng) -> Polynomial {
    let terms = Monomial::all_of_degree(poly.nvars(), d)
        .into_iter()
        .filter_map(|m| rng.gen_bool(0.5).then(|| (rng.gen_range(0..poly.p()), m)))
        .collect();
    Polynomial::from_terms(poly, terms)
}

// ---------------------------------------------------------------------------
// resolutions

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn resolutions_are_minimal_complexes(k in 0usize..5, rank in 1usize..3, seed in any::<u64>()) {
        let f = fixture(k);
        let m = random_module(&f.ring, rank, 2, seed).unwrap();
        let res = resolve(&m, 4, 5).unwrap();
        prop_assert!(res.complex().composites_vanish());
        prop_assert!(res.complex().is_minimal());
        for i in 1..4 {
            for d in 0..=5 {
                prop_assert_eq!(res.homology_dims(i, d).unwrap(), 0, "H_{} in degree {}", i, d);
            }
        }
    }

    #[test]
    fn euler_characteristic(k in 0usize..5, seed in any::<u64>()) {
        let f = fixture(k);
        let m = random_module(&f.ring, 2, 2, seed).unwrap();
        let dmax = 5;
        // F_i is generated in degrees >= i, so i <= dmax covers every term
        let t = betti_table(&resolve(&m, dmax as usize + 1, dmax).unwrap());
        for d in 0..=dmax {
            let mut sum: i64 = 0;
            for (&(i, j), &b) in t.entries() {
                if j <= d {
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    sum += sign * b as i64 * f.ring.dim(d - j) as i64;
                }
            }
            prop_assert_eq!(sum, m.dim(d) as i64, "degree {}", d);
        }
    }

    #[test]
    fn tor_is_symmetric(k in 0usize..5, seed in any::<u64>()) {
        let f = fixture(k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_linear(&f.ring, &mut rng);
        let cyclic = GradedModule::cyclic(&f.ring, std::slice::from_ref(&l)).unwrap();
        let direct = betti_table(&resolve(&cyclic, 3, 4).unwrap());
        let (_, map) = f.ring.quotient_by(&[l]).unwrap();
        let kres = resolve(&GradedModule::residue_field(&f.ring), 4, 4).unwrap();
        let tensored = kres.complex().transfer(&map);
        for i in 0..=3 {
            for d in 0..=4 {
                prop_assert_eq!(direct.get(i, d), tensored.homology_dims(i, d).unwrap(), "Tor_{} in degree {}", i, d);
            }
        }
    }

    #[test]
    fn presentations_normalize_without_changing_hilbert_function(k in 0usize..5, seed in any::<u64>()) {
        let f = fixture(k);
        let ring = &f.ring;
        let base = random_module(ring, 2, 2, seed).unwrap();
        // add a redundant generator e_2 = l e_0 + l' e_1 of degree 1
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let shifts = vec![0, 0, 1];
        let mut cols: Vec<FreeModuleVector> = base
            .columns()
            .iter()
            .map(|c| {
                let mut comps = c.components().to_vec();
                comps.push(Polynomial::zero(ring.poly_ring()));
                FreeModuleVector::new(comps, shifts.clone())
            })
            .collect();
        let unit = Polynomial::constant(ring.poly_ring(), -1);
        cols.push(FreeModuleVector::new(vec![random_linear(ring, &mut rng), random_linear(ring, &mut rng), unit], shifts.clone()));
        let m = GradedModule::new(ring, shifts.clone(), cols.clone()).unwrap();
        prop_assert_eq!(m.rank(), 2);
        for d in 0..=6 {
            prop_assert_eq!(m.dim(d), cokernel_dim(ring, &shifts, &cols, d), "degree {}", d);
        }
    }

    #[test]
    fn random_modules_resolve(k in 0usize..5, rank in 1usize..4, deg in 0usize..3, seed in any::<u64>()) {
        let f = fixture(k);
        let m = random_module(&f.ring, rank, deg, seed).unwrap();
        prop_assert!(resolve(&m, 3, 4).is_ok());
    }
}

#[test]
fn random_modules_resolve_over_fifty_seeds() {
    for f in fixtures() {
        for seed in 0..50 {
            let m = random_module(&f.ring, 2, 2, seed).unwrap();
            assert!(resolve(&m, 3, 4).is_ok(), "{} seed {seed}", f.name);
        }
    }
}

#[test]
fn graded_pieces_match_hilbert_series() {
    for f in fixtures() {
        let h = f.ring.hilbert_series(8);
        for d in 0..=8 {
            assert_eq!(f.ring.graded_piece_basis(d as i32).len() as u64, h.expansion[d], "{} degree {d}", f.name);
            assert_eq!(cokernel_dim(&f.ring, &[0], &[], d as i32) as u64, h.expansion[d], "{} degree {d}", f.name);
        }
    }
}

#[test]
fn koszul_fixtures_satisfy_the_residue_field_identity() {
    for f in fixtures() {
        assert_eq!(residue_field_identity(&f.ring, 5, 8).unwrap(), f.tags.koszul, "{}", f.name);
    }
}

// ---------------------------------------------------------------------------
// Gröbner bases

fn random_ideal(seed: u64) -> (Arc<PolyRing>, Vec<Polynomial>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = [2, 3, 5, 7, 32003][rng.gen_range(0..5)];
    let n = rng.gen_range(2..=3);
    let names = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
    let poly = PolyRing::new(p, names, MonomialOrder::DegRevLex).unwrap();
    let gens = (0..rng.gen_range(1..=3)).map(|_| random_form(&poly, rng.gen_range(2..=3), &mut rng)).filter(|g| !g.is_zero()).collect();
    (poly, gens)
}

/// Membership of a degree-`d` form by spanning `I_d` with monomial multiples.
fn in_ideal_by_span(poly: &Arc<PolyRing>, gens: &[Polynomial], f: &Polynomial, d: i32) -> bool {
    let c = Coords::new(poly.nvars(), d);
    let mut rows = Vec::new();
    for g in gens {
        for m in monomials(poly.nvars(), d - g.degree().unwrap() as i32) {
            let mut v = vec![0; c.len];
            c.of(&g.mul_monomial(1, &m), &mut v);
            rows.push(v);
        }
    }
    let r = rank(poly.field(), &rows);
    let mut v = vec![0; c.len];
    c.of(f, &mut v);
    rows.push(v);
    rank(poly.field(), &rows) == r
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn reduced_bases_ignore_generator_order(seed in any::<u64>()) {
        let (poly, mut gens) = random_ideal(seed);
        let a = buchberger(&poly, &gens);
        gens.reverse();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if gens.len() > 1 {
            let i = rng.gen_range(0..gens.len());
            gens.swap(0, i);
        }
        let b = buchberger(&poly, &gens);
        prop_assert_eq!(a.generators(), b.generators());
        prop_assert!(a.is_reduced());
    }

    #[test]
    fn normal_forms_and_membership(seed in any::<u64>(), d in 2u32..=6) {
        let (poly, gens) = random_ideal(seed);
        let gb = buchberger(&poly, &gens);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(d as u64));
        // half the samples are built inside the ideal
        let f = if rng.gen_bool(0.5) {
            random_form(&poly, d, &mut rng)
        } else {
            gens.iter()
                .filter(|g| g.degree().unwrap() <= d)
                .map(|g| g.mul_unchecked(&random_form(&poly, d - g.degree().unwrap(), &mut rng)))
                .fold(Polynomial::zero(&poly), |a, b| a.try_add(&b).unwrap())
        };
        let nf = gb.normal_form(&f).unwrap();
        prop_assert!(gb.normal_form(&f.try_sub(&nf).unwrap()).unwrap().is_zero());
        prop_assert_eq!(gb.normal_form(&nf).unwrap(), nf.clone());
        prop_assert_eq!(gb.contains(&f), in_ideal_by_span(&poly, &gens, &f, d as i32));
    }

    #[test]
    fn colon_ideals_are_correct_and_maximal(k in 0usize..5, seed in any::<u64>()) {
        let f = fixture(k);
        let ring = &f.ring;
        let poly = ring.poly_ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j: Vec<Polynomial> = (0..rng.gen_range(0..=1)).map(|_| random_linear(ring, &mut rng)).collect();
        let i: Vec<Polynomial> = (0..rng.gen_range(1..=2)).map(|_| random_linear(ring, &mut rng)).collect();
        let colon = colon_ideal(ring, &j, &i).unwrap();
        let mut jr = j.clone();
        jr.extend_from_slice(ring.generators());
        let target = buchberger(poly, &jr);
        for g in colon.generators() {
            for h in &i {
                prop_assert!(target.normal_form(&g.mul_unchecked(h)).unwrap().is_zero());
            }
        }
        // the colon in degree d is the kernel of f -> (f h)_h modulo J + I_R
        for d in 0..=3 {
            let monos = monomials(ring.nvars(), d);
            let out = Coords::new(ring.nvars(), d + 1);
            let images: Vec<Vec<u32>> = monos
                .iter()
                .map(|m| {
                    let mut v = vec![0; out.len * i.len()];
                    for (k, h) in i.iter().enumerate() {
                        let r = target.normal_form(&h.mul_monomial(1, m)).unwrap();
                        out.of(&r, &mut v[k * out.len..(k + 1) * out.len]);
                    }
                    v
                })
                .collect();
            let kernel_dim = monos.len() - rank(ring.field(), &images);
            let lead = colon.leading_monomials();
            let colon_dim = monos.iter().filter(|m| lead.iter().any(|l| l.divides(m))).count();
            prop_assert_eq!(kernel_dim, colon_dim, "degree {}", d);
        }
    }

    #[test]
    fn syzygies_pair_to_zero(k in 0usize..5, seed in any::<u64>()) {
        let f = fixture(k);
        let ring = &f.ring;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shifts = vec![0, 0];
        let vectors: Vec<FreeModuleVector> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let e = rng.gen_range(1..=2);
                let comps = (0..2).map(|_| ring.reduce(&random_form(ring.poly_ring(), e, &mut rng))).collect();
                FreeModuleVector::new(comps, shifts.clone())
            })
            .filter(|v| !v.is_zero())
            .collect();
        prop_assume!(!vectors.is_empty());
        for s in syzygy_basis(ring, &vectors, Some(5)).unwrap() {
            for c in 0..2 {
                let sum = s
                    .components()
                    .iter()
                    .zip(&vectors)
                    .map(|(a, v)| a.mul_unchecked(&v.components()[c]))
                    .fold(Polynomial::zero(ring.poly_ring()), |x, y| x.try_add(&y).unwrap());
                prop_assert!(ring.reduce(&sum).is_zero());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// certificates

#[test]
fn constructed_certificates_verify() {
    let get = |n: &str| build_fixture(n).unwrap();
    let crv = get("crv26");
    assert!(verify_koszul_filtration(&crv.ring, &subsets_filtration(&crv.ring).unwrap()).unwrap().valid);
    for name in ["ci2", "fz3"] {
        let f = get(name);
        let c = all_linear_ideals_filtration(&f.ring, DEFAULT_SUBSPACE_BUDGET).unwrap();
        assert!(verify_koszul_filtration(&f.ring, &c).unwrap().valid, "{name}");
        let x = f.tags.conca.clone().unwrap();
        let flag = conca_flag(&f.ring, &x, DEFAULT_SUBSPACE_BUDGET).unwrap();
        assert!(verify_groebner_flag(&f.ring, &flag).unwrap().valid, "{name}");
        // a Conca generator forces m^3 = 0, and a linear form is never in m^2
        assert!(check_conca_generator(&f.ring, &x).unwrap().holds);
        assert_eq!(f.ring.dim(3), 0, "{name}");
    }
    let mm = get("mm1");
    let j = LinearIdeal::new(mm.ring.field(), 2, &mm.tags.min_mult.clone().unwrap()).unwrap();
    let flag = minimal_multiplicity_flag(&mm.ring, &j, 6).unwrap();
    assert!(verify_groebner_flag(&mm.ring, &flag).unwrap().valid);
}

// ---------------------------------------------------------------------------
// input documents

fn random_document(seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = if rng.gen_bool(0.5) {
        fixture(rng.gen_range(0..5)).ring
    } else {
        let (poly, gens) = random_ideal(seed);
        Arc::new(QuotientRing::new(poly.p(), poly.names().to_vec(), gens).unwrap())
    };
    let mut text = InputDocument::from_ring(&ring).to_string();
    for k in 0..rng.gen_range(0..3) {
        let m = random_module(&ring, rng.gen_range(1..=3), rng.gen_range(1..=2), rng.gen()).unwrap();
        text.push_str(&module_block(&format!("M{k}"), &m));
    }
    if rng.gen_bool(0.5) {
        text.push_str("cert name=F {\"forms\": [[1, 0]], \"colons\": [0]}\n");
    }
    text
}

#[test]
fn documents_round_trip() {
    for seed in 0..50 {
        let text = random_document(seed);
        let doc = parse_input(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        let printed = doc.to_string();
        let again = parse_input(&printed).unwrap();
        assert_eq!(again, doc, "seed {seed}");
        assert_eq!(again.to_string(), printed, "seed {seed}");
    }
}
