//! Named fixture rings, seeded random modules and the theorem suites that
//! exercise them.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{Monomial, MonomialOrder, PolyRing, Polynomial};
use crate::cli::module_block;
use crate::error::{Error, Result};
use crate::filtration::{
    all_linear_ideals_filtration, check_conca_generator, check_fitzgerald, check_reduction, conca_flag,
    minimal_multiplicity_flag, subsets_filtration, LinearIdeal, DEFAULT_SUBSPACE_BUDGET,
};
use crate::groebner::{colon_ideal, FreeModuleVector};
use crate::koszul::{koszul_verdict, Method, Verdict};
use crate::quotient::{GradedModule, QuotientRing};
use crate::resolution::{betti_table, regularity_verdict, resolve, Bounds};

pub const DEFAULT_BOUNDS: (usize, i32) = (5, 8);

pub const FIXTURE_NAMES: [&str; 5] = ["ci2", "crv26", "mm1", "nk3", "fz3"];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tags {
    pub koszul: bool,
    /// a Conca generator of the maximal ideal
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conca: Option<Vec<u32>>,
    pub fitzgerald: bool,
    /// basis of a minimal reduction `J` of a ring of minimal multiplicity
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_mult: Option<Vec<Vec<u32>>>,
    /// the ideals generated by subsets of the variables form a Koszul filtration
    pub subsets: bool,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub ring: Arc<QuotientRing>,
    pub tags: Tags,
    pub note: &'static str,
}

fn monomial_ring(p: u32, names: &[&str], gens: &[&[u16]]) -> Result<Arc<QuotientRing>> {
    let poly = PolyRing::new(p, names.iter().map(|s| s.to_string()).collect(), MonomialOrder::DegRevLex)?;
    let g = gens.iter().map(|e| Polynomial::monomial(&poly, 1, Monomial::new(e.to_vec()))).collect();
    Ok(Arc::new(QuotientRing::new(p, poly.names().to_vec(), g)?))
}

/// Builds a named fixture and re-verifies each of its tags.
pub fn build_fixture(name: &str) -> Result<Fixture> {
    let (ring, tags, note) = match name {
        "ci2" => (
            monomial_ring(5, &["x", "y"], &[&[2, 0], &[0, 2]])?,
            Tags { koszul: true, conca: Some(vec![1, 0]), fitzgerald: true, ..Tags::default() },
            "complete intersection of two squares; x is a Conca generator and every linear form satisfies the Fitzgerald condition",
        ),
        "crv26" => (
            monomial_ring(32003, &["x", "y", "z"], &[&[2, 0, 0], &[1, 1, 0], &[0, 1, 1], &[0, 0, 2]])?,
            Tags { koszul: true, subsets: true, ..Tags::default() },
            "Koszul via the subsets-of-variables filtration; over F_2 it has no Gröbner flag",
        ),
        "mm1" => (
            monomial_ring(32003, &["x", "y"], &[&[0, 2]])?,
            Tags { koszul: true, min_mult: Some(vec![vec![1, 0]]), ..Tags::default() },
            "one-dimensional Cohen-Macaulay ring with e = 2 = h + 1; (x) is a minimal reduction",
        ),
        "nk3" => (
            monomial_ring(5, &["x"], &[&[3]])?,
            Tags::default(),
            "non-Koszul control: k has the periodic resolution with alternating maps x and x^2",
        ),
        "fz3" => (
            monomial_ring(3, &["x", "y", "z"], &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[1, 1, 0]])?,
            Tags { koszul: true, conca: Some(vec![0, 0, 1]), fitzgerald: true, ..Tags::default() },
            "m^3 = 0 with the Fitzgerald condition; z is also a Conca generator",
        ),
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    verify_tags(name, &ring, &tags)?;
    Ok(Fixture { name: name.to_string(), ring, tags, note })
}

fn verify_tags(name: &str, ring: &Arc<QuotientRing>, tags: &Tags) -> Result<()> {
    let mismatch = |what: &str| Err(Error::HypothesisMismatch(format!("{name}: {what}")));
    let (i, d) = DEFAULT_BOUNDS;
    let v = koszul_verdict(&GradedModule::residue_field(ring), i, d, Method::BettiDiagonal)?;
    if (v.verdict == Verdict::Yes) != tags.koszul {
        return mismatch("Koszul tag disagrees with the Betti table of k");
    }
    if let Some(x) = &tags.conca {
        if !check_conca_generator(ring, x)?.holds {
            return mismatch("tagged Conca generator fails");
        }
    }
    if tags.fitzgerald && !check_fitzgerald(ring, DEFAULT_SUBSPACE_BUDGET)?.holds {
        return mismatch("Fitzgerald condition fails");
    }
    if let Some(j) = &tags.min_mult {
        let j = LinearIdeal::new(ring.field(), ring.nvars(), j)?;
        let c = check_reduction(ring, &j, 6)?;
        if !(c.reduction && c.regular_sequence && c.minimal_multiplicity) {
            return mismatch("minimal reduction data fails");
        }
    }
    if tags.subsets && subsets_filtration(ring).is_err() {
        return mismatch("subsets family is not a Koszul filtration");
    }
    Ok(())
}

fn random_form(ring: &QuotientRing, d: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let terms = ring
        .graded_piece_basis(d as i32)
        .into_iter()
        .map(|m| (rng.gen_range(0..ring.p()), m))
        .collect();
    Polynomial::from_terms(ring.poly_ring(), terms)
}

/// A module generated in degree 0 with `rank` generators and a seeded
/// number of homogeneous relations whose entries have degree at most
/// `max_entry_degree`. With `max_entry_degree = 0` the module is free.
pub fn random_module(ring: &Arc<QuotientRing>, rank: usize, max_entry_degree: usize, seed: u64) -> Result<GradedModule> {
    if rank == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts = vec![0; rank];
    if max_entry_degree == 0 {
        return GradedModule::free(ring, shifts);
    }
    let ncols = rng.gen_range(0..=rank + 2);
    let mut cols = Vec::with_capacity(ncols);
    for _ in 0..ncols {
        let e = rng.gen_range(1..=max_entry_degree);
        let comps = (0..rank)
            .map(|_| if rng.gen_bool(0.3) { Polynomial::zero(ring.poly_ring()) } else { random_form(ring, e, &mut rng) })
            .collect();
        cols.push(FreeModuleVector::new(comps, shifts.clone()));
    }
    GradedModule::new(ring, shifts, cols)
}

fn random_linear_form(ring: &QuotientRing, rng: &mut ChaCha8Rng) -> Vec<u32> {
    loop {
        let v: Vec<u32> = (0..ring.nvars()).map(|_| rng.gen_range(0..ring.p())).collect();
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

/// A seeded homogeneous ideal with one or two generators of degree 1 or 2.
fn random_ideal(ring: &QuotientRing, rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    let s = rng.gen_range(1..=2);
    (0..s).map(|_| random_form(ring, rng.gen_range(1..=2), rng)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub id: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub fixture: String,
    pub seed: u64,
    pub bounds: Bounds,
    pub assertions: Vec<Assertion>,
    #[serde(skip)]
    pub pass: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }
}

struct Suite {
    bounds: (usize, i32),
    assertions: Vec<Assertion>,
}

impl Suite {
    fn record(&mut self, id: String, pass: bool, witness: Option<Value>) {
        self.assertions.push(Assertion { id, pass, witness: if pass { None } else { witness } });
    }

    /// Koszulness of a module, by the diagonal Betti test.
    fn koszul(&mut self, id: String, m: &GradedModule) -> Result<()> {
        let (i, d) = self.bounds;
        let v = koszul_verdict(m, i, d, Method::BettiDiagonal)?;
        let w = json!({ "module": module_block("M", m), "bidegree": v.witness });
        self.record(id, v.verdict == Verdict::Yes, Some(w));
        Ok(())
    }

    fn regularity_at_most_one(&mut self, id: String, m: &GradedModule) -> Result<()> {
        let (i, d) = self.bounds;
        let v = regularity_verdict(&betti_table(&resolve(m, i, d)?));
        let w = json!({ "module": module_block("M", m), "regularity": v });
        self.record(id, v.value() <= 1, Some(w));
        Ok(())
    }

    fn quotient_koszul(&mut self, id: String, ring: &Arc<QuotientRing>, ideal: &[Polynomial]) -> Result<()> {
        let (i, d) = self.bounds;
        let (q, _) = ring.quotient_by(ideal)?;
        let v = koszul_verdict(&GradedModule::residue_field(&q), i, d, Method::BettiDiagonal)?;
        let shown: Vec<String> = ideal.iter().map(|f| f.to_string()).collect();
        let w = json!({ "ideal": shown, "bidegree": v.witness });
        self.record(id, v.verdict == Verdict::Yes, Some(w));
        Ok(())
    }
}

/// Samples per family.
const MODULES: usize = 10;
const QUOTIENTS: usize = 5;

/// Runs one of the suites `reg`, `minmult`, `fitz` on a fixture.
pub fn theorem_suite(id: &str, fixture: &Fixture, seed: u64, bounds: (usize, i32)) -> Result<SuiteReport> {
    let ring = &fixture.ring;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suite = Suite { bounds, assertions: Vec::new() };
    let module_seed = |rng: &mut ChaCha8Rng| -> Result<GradedModule> {
        let rank = rng.gen_range(1..=3);
        random_module(ring, rank, 2, rng.gen())
    };
    match id {
        "reg" => {
            let Some(x) = fixture.tags.conca.clone() else {
                return Err(Error::HypothesisMismatch(format!("{} has no Conca generator", fixture.name)));
            };
            let c = check_conca_generator(ring, &x)?;
            suite.record("conca-generator".into(), c.holds, Some(json!(c.failed)));
            let flag = conca_flag(ring, &x, 10_000);
            suite.record("conca-flag".into(), flag.is_ok(), flag.err().map(|e| json!(e.to_string())));
            let xf = ring.linear_form(&x);
            for k in 0..MODULES {
                let m = module_seed(&mut rng)?.annihilated_by(std::slice::from_ref(&xf))?;
                suite.koszul(format!("killed-by-x/{k}"), &m)?;
            }
            for k in 0..MODULES {
                let m = module_seed(&mut rng)?;
                suite.regularity_at_most_one(format!("regularity/{k}"), &m)?;
                suite.koszul(format!("m-times-module/{k}"), &m.maximal_ideal_times()?)?;
            }
            for k in 0..QUOTIENTS {
                let ideal = random_ideal(ring, &mut rng);
                suite.quotient_koszul(format!("quotient/{k}"), ring, &ideal)?;
            }
        }
        "minmult" => {
            let Some(jb) = fixture.tags.min_mult.clone() else {
                return Err(Error::HypothesisMismatch(format!("{} carries no minimal reduction", fixture.name)));
            };
            let j = LinearIdeal::new(ring.field(), ring.nvars(), &jb)?;
            let c = check_reduction(ring, &j, 6)?;
            suite.record("reduction".into(), c.reduction, Some(json!(c)));
            suite.record("regular-sequence".into(), c.regular_sequence, Some(json!(c)));
            suite.record("minimal-multiplicity".into(), c.minimal_multiplicity, Some(json!(c)));
            let flag = minimal_multiplicity_flag(ring, &j, 6);
            suite.record("reduction-flag".into(), flag.is_ok(), flag.err().map(|e| json!(e.to_string())));
            let forms = j.forms(ring);
            for k in 0..QUOTIENTS {
                let m = module_seed(&mut rng)?.annihilated_by(&forms)?;
                suite.koszul(format!("killed-by-reduction/{k}"), &m)?;
            }
        }
        "fitz" => {
            if !fixture.tags.fitzgerald {
                return Err(Error::HypothesisMismatch(format!("{} is not tagged Fitzgerald", fixture.name)));
            }
            let c = check_fitzgerald(ring, DEFAULT_SUBSPACE_BUDGET)?;
            suite.record("fitzgerald".into(), c.holds, Some(json!(c)));
            let f = all_linear_ideals_filtration(ring, DEFAULT_SUBSPACE_BUDGET);
            suite.record("all-linear-filtration".into(), f.is_ok(), f.err().map(|e| json!(e.to_string())));
            for k in 0..MODULES {
                let x = random_linear_form(ring, &mut rng);
                let ann = colon_ideal(ring, &[], &[ring.linear_form(&x)])?;
                let m = module_seed(&mut rng)?.annihilated_by(ann.generators())?;
                suite.koszul(format!("killed-by-annihilator/{k}"), &m)?;
            }
            for k in 0..MODULES {
                let m = module_seed(&mut rng)?;
                let s = rng.gen_range(1..=ring.nvars());
                let xs: Vec<Polynomial> = (0..s).map(|_| ring.linear_form(&random_linear_form(ring, &mut rng))).collect();
                suite.koszul(format!("forms-times-module/{k}"), &m.ideal_times(&xs)?)?;
                suite.regularity_at_most_one(format!("regularity/{k}"), &m)?;
            }
            for k in 0..QUOTIENTS {
                let ideal = random_ideal(ring, &mut rng);
                suite.quotient_koszul(format!("quotient/{k}"), ring, &ideal)?;
            }
        }
        _ => return Err(Error::InvalidArgument(format!("unknown suite {id:?}"))),
    }
    let pass = suite.assertions.iter().all(|a| a.pass);
    Ok(SuiteReport {
        suite: id.to_string(),
        fixture: fixture.name.clone(),
        seed,
        bounds: Bounds { imax: bounds.0, dmax: bounds.1 },
        assertions: suite.assertions,
        pass,
    })
}
