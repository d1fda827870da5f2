//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::time::Instant;

use koszulkit::cli::run_cli;
use koszulkit::corpus::{build_fixture, random_module, theorem_suite, Fixture, FIXTURE_NAMES};
use koszulkit::filtration::{
    all_linear_ideals_filtration, check_fitzgerald, check_reduction, subsets_filtration, verify_koszul_filtration, FlagCertificate,
    LinearIdeal, DEFAULT_SUBSPACE_BUDGET,
};
use koszulkit::koszul::{check_factorization, koszul_verdict, poincare_hilbert_check, verdict_transfer_check, Method, Verdict};
use koszulkit::quotient::GradedModule;
use koszulkit::resolution::{betti_table, resolve};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> Result<Fixture, String> {
    build_fixture(name).map_err(|e| format!("{name}: {e}"))
}

/// Exponent vectors of all monomials of degree `d` in `n` variables.
fn monomials(n: usize, d: u16) -> Vec<Vec<u16>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for a in 0..=d {
        for mut rest in monomials(n - 1, d - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Standard monomials of degree `d` modulo a monomial ideal.
fn standard_count(n: usize, gens: &[&[u16]], d: u16) -> u64 {
    monomials(n, d).iter().filter(|m| !gens.iter().any(|g| divides(g, m))).count() as u64
}

fn hilbert_correctness() -> Outcome {
    let cases: [(&str, usize, &[&[u16]]); 4] = [
        ("ci2", 2, &[&[2, 0], &[0, 2]]),
        ("crv26", 3, &[&[2, 0, 0], &[1, 1, 0], &[0, 1, 1], &[0, 0, 2]]),
        ("mm1", 2, &[&[0, 2]]),
        ("nk3", 1, &[&[3]]),
    ];
    for (name, n, gens) in cases {
        let f = fixture(name)?;
        let got = f.ring.hilbert_series(10).expansion;
        let want: Vec<u64> = (0..=10).map(|d| standard_count(n, gens, d)).collect();
        ensure(got == want, || format!("{name}: series gives {got:?}, enumeration {want:?}"))?;
    }
    let crv = fixture("crv26")?.ring.hilbert_series(10).expansion;
    ensure(crv[..5] == [1, 3, 2, 1, 1], || format!("crv26 expansion {crv:?}"))?;
    Ok("4 fixtures, degrees 0..=10".into())
}

fn koszul_positive() -> Outcome {
    let f = fixture("ci2")?;
    let t = betti_table(&resolve(&GradedModule::residue_field(&f.ring), 5, 8).map_err(|e| e.to_string())?);
    // 1/H_R(-t) = 1/(1-t)^2 has coefficients i+1
    for i in 0..=5usize {
        for j in 0..=8i32 {
            let want = if j == i as i32 { i + 1 } else { 0 };
            ensure(t.get(i, j) == want, || format!("beta_{i},{j} = {}, expected {want}", t.get(i, j)))?;
        }
    }
    Ok("beta_ii = i+1 for i <= 5, nothing off the diagonal".into())
}

fn koszul_negative() -> Outcome {
    let f = fixture("nk3")?;
    let k = GradedModule::residue_field(&f.ring);
    let v = koszul_verdict(&k, 5, 8, Method::BettiDiagonal).map_err(|e| e.to_string())?;
    ensure(v.verdict == Verdict::No && v.witness == Some((2, 3)), || format!("verdict {:?} witness {:?}", v.verdict, v.witness))?;
    let c = poincare_hilbert_check(&k, 5, 8).map_err(|e| e.to_string())?;
    ensure(!c.holds && c.fails_at == Some(2), || format!("poincare check fails at {:?}", c.fails_at))?;
    Ok("verdict no at (2,3); Poincaré–Hilbert fails at degree 2".into())
}

fn equivalence() -> Outcome {
    let (mut count, mut negatives) = (0, 0);
    for name in FIXTURE_NAMES {
        let f = fixture(name)?;
        let ring = &f.ring;
        let mut modules = vec![("k".to_string(), GradedModule::residue_field(ring))];
        let l = ring.var(0);
        modules.push(("R/(l)".into(), GradedModule::cyclic(ring, &[l]).map_err(|e| e.to_string())?));
        for seed in [1u64, 2] {
            modules.push((format!("random/{seed}"), random_module(ring, 2, 2, seed).map_err(|e| e.to_string())?));
        }
        for (label, m) in modules {
            let a = koszul_verdict(&m, 5, 8, Method::BettiDiagonal).map_err(|e| e.to_string())?;
            let b = koszul_verdict(&m, 5, 8, Method::LinearPart).map_err(|e| e.to_string())?;
            let g = m.indeg().unwrap_or(0);
            let c = poincare_hilbert_check(&m.shifted(g).map_err(|e| e.to_string())?, 5, 8).map_err(|e| e.to_string())?;
            let yes = [a.verdict == Verdict::Yes, b.verdict == Verdict::Yes, c.holds];
            ensure(yes[0] == yes[1] && yes[1] == yes[2], || format!("{name} {label}: diagonal/linear-part/poincare = {yes:?}"))?;
            ensure(a.verdict != Verdict::Inconclusive, || format!("{name} {label}: inconclusive"))?;
            count += 1;
            negatives += usize::from(!yes[0]);
        }
    }
    Ok(format!("{count} modules ({negatives} not Koszul), no disagreements"))
}

fn filtration_soundness() -> Outcome {
    let mut quotients = 0;
    for (name, subsets) in [("crv26", true), ("ci2", false)] {
        let f = fixture(name)?;
        let ring = &f.ring;
        let cert = if subsets {
            subsets_filtration(ring)
        } else {
            all_linear_ideals_filtration(ring, DEFAULT_SUBSPACE_BUDGET)
        }
        .map_err(|e| e.to_string())?;
        let v = verify_koszul_filtration(ring, &cert).map_err(|e| e.to_string())?;
        ensure(v.valid, || format!("{name}: {:?}", v.failure))?;
        if !subsets {
            ensure(cert.members.len() == 8, || format!("ci2 family has {} members", cert.members.len()))?;
        }
        for rows in &cert.members {
            let ideal = LinearIdeal::new(ring.field(), ring.nvars(), rows).map_err(|e| e.to_string())?;
            let forms = ideal.forms(ring);
            let cyclic = GradedModule::cyclic(ring, &forms).map_err(|e| e.to_string())?;
            let v = koszul_verdict(&cyclic, 4, 6, Method::BettiDiagonal).map_err(|e| e.to_string())?;
            ensure(v.verdict == Verdict::Yes, || format!("{name}: R/I for I = {rows:?} gives {:?}", v.verdict))?;
            if !forms.is_empty() {
                let (q, _) = ring.quotient_by(&forms).map_err(|e| e.to_string())?;
                let v = koszul_verdict(&GradedModule::residue_field(&q), 4, 6, Method::BettiDiagonal).map_err(|e| e.to_string())?;
                ensure(v.verdict == Verdict::Yes, || format!("{name}: ring R/I for I = {rows:?} gives {:?}", v.verdict))?;
            }
            quotients += 1;
        }
    }
    Ok(format!("both families valid; {quotients} member quotients Koszul"))
}

fn factorization() -> Outcome {
    let f = fixture("ci2")?;
    let ring = &f.ring;
    let chain = FlagCertificate { forms: vec![vec![1, 0], vec![0, 1]], colons: vec![1, 2] }.chain(ring).map_err(|e| e.to_string())?;
    let k = GradedModule::residue_field(ring);
    let c = check_factorization(&k, &chain, 1, 5, 8).map_err(|e| e.to_string())?;
    ensure(c.holds, || format!("fails at {:?}", c.witness))?;
    // k over R has i+1 on the diagonal; both factors have 1 on the diagonal,
    // and 1/(1-tu) * 1/(1-tu) = sum (i+1) (tu)^i
    for i in 0..=5 {
        let key = format!("{i},{i}");
        let a = c.over_ring.entries.get(&key).copied().unwrap_or(0);
        let b = c.over_quotient.entries.get(&key).copied().unwrap_or(0);
        let q = c.quotient_over_ring.entries.get(&key).copied().unwrap_or(0);
        ensure(a == i + 1 && b == 1 && q == 1, || format!("diagonal entry {i}: {a} {b} {q}"))?;
    }
    let sizes = [&c.over_ring, &c.over_quotient, &c.quotient_over_ring].map(|t| t.entries.len());
    ensure(sizes == [6, 6, 6], || format!("off-diagonal entries present: {sizes:?}"))?;
    let t = verdict_transfer_check(&k, &chain, 1, 5, 8).map_err(|e| e.to_string())?;
    ensure(t.consistent, || "verdict transfer inconsistent".into())?;
    Ok("coefficient-wise for i <= 5; transfer consistent".into())
}

fn suite(id: &str, name: &str, expect: &[(&str, usize)]) -> Result<usize, String> {
    let f = fixture(name)?;
    let r = theorem_suite(id, &f, 0, (5, 8)).map_err(|e| e.to_string())?;
    let failed: Vec<String> = r.failures().map(|a| a.id.clone()).collect();
    ensure(failed.is_empty() && r.pass, || format!("{id} on {name}: failed {failed:?}"))?;
    for (prefix, n) in expect {
        let got = r.assertions.iter().filter(|a| a.id.split('/').next() == Some(prefix)).count();
        ensure(got == *n, || format!("{id} on {name}: {got} {prefix} assertions, expected {n}"))?;
    }
    Ok(r.assertions.len())
}

fn reg_suite() -> Outcome {
    let n = suite(
        "reg",
        "ci2",
        &[("conca-generator", 1), ("killed-by-x", 10), ("regularity", 10), ("m-times-module", 10), ("quotient", 5)],
    )?;
    Ok(format!("{n} assertions, zero failures"))
}

fn fitz_suite() -> Outcome {
    let mut total = 0;
    for name in ["ci2", "fz3"] {
        let f = fixture(name)?;
        let c = check_fitzgerald(&f.ring, DEFAULT_SUBSPACE_BUDGET).map_err(|e| e.to_string())?;
        let p = f.ring.p() as usize;
        let n = f.ring.nvars() as u32;
        let orbits = (p.pow(n) - 1) / (p - 1);
        ensure(c.holds && c.forms_checked == orbits, || format!("{name}: holds {} after {} forms", c.holds, c.forms_checked))?;
        total += suite("fitz", name, &[("quotient", 5)])?;
    }
    Ok(format!("{total} assertions on ci2 and fz3, zero failures"))
}

fn minmult_suite() -> Outcome {
    let f = fixture("mm1")?;
    let ring = &f.ring;
    // x times the standard monomials of degree i covers degree i+1 exactly
    // when every standard monomial of degree i+1 involves x
    for i in 1..=6u16 {
        let missing: Vec<Vec<u16>> = monomials(2, i + 1).into_iter().filter(|m| m[1] < 2 && m[0] == 0).collect();
        ensure(missing.is_empty(), || format!("J m^{i} misses {missing:?}"))?;
    }
    let j = LinearIdeal::new(ring.field(), ring.nvars(), &[vec![1, 0]]).map_err(|e| e.to_string())?;
    let c = check_reduction(ring, &j, 6).map_err(|e| e.to_string())?;
    ensure(c.reduction && c.regular_sequence, || format!("{c:?}"))?;
    ensure(c.multiplicity == 2 && c.codim == 1 && c.minimal_multiplicity, || format!("e = {}, h = {}", c.multiplicity, c.codim))?;
    let n = suite("minmult", "mm1", &[("reduction-flag", 1), ("killed-by-reduction", 5)])?;
    Ok(format!("e = h + 1 = 2; {n} suite assertions, zero failures"))
}

fn cli_json(args: &[&str], input: &str) -> (String, i32) {
    let mut argv = vec!["koszulkit", "--format", "json"];
    argv.extend_from_slice(args);
    let o = run_cli(argv, &mut input.as_bytes());
    (o.stdout, o.code)
}

fn determinism() -> Outcome {
    let doc = include_str!("fixtures/ci2.txt");
    let mut runs: Vec<(Vec<&str>, &str)> = Vec::new();
    for name in FIXTURE_NAMES {
        for cmd in [
            &["hilbert"][..],
            &["gb"],
            &["resolve"],
            &["betti"],
            &["reg"],
            &["koszul"],
            &["koszul", "--method", "linear-part"],
            &["linpart"],
            &["poincare"],
            &["example", name],
        ] {
            let mut a = vec!["--fixture", name];
            a.extend_from_slice(cmd);
            runs.push((a, ""));
        }
    }
    for cmd in [
        &["--fixture", "ci2", "suite", "reg", "--seed", "7"][..],
        &["--fixture", "ci2", "suite", "fitz"],
        &["--fixture", "fz3", "suite", "fitz"],
        &["--fixture", "mm1", "suite", "minmult"],
        &["--fixture", "crv26", "filtration", "subsets"],
        &["--fixture", "ci2", "filtration", "all-linear"],
        &["--fixture", "ci2", "flag", "search"],
        &["--fixture", "ci2", "flag", "conca", "--form", "x"],
        &["--fixture", "mm1", "flag", "minmult", "--form", "x"],
        &["--fixture", "ci2", "colon", "--i", "x"],
    ] {
        runs.push((cmd.to_vec(), ""));
    }
    for cmd in [
        &["--module", "M", "betti"][..],
        &["filtration", "verify", "--cert", "filt"],
        &["flag", "verify", "--cert", "flag"],
        &["factorize", "--cert", "flag", "--r", "1"],
    ] {
        runs.push((cmd.to_vec(), doc));
    }
    for (args, input) in &runs {
        let (a, ca) = cli_json(args, input);
        let (b, cb) = cli_json(args, input);
        ensure(!a.is_empty(), || format!("{args:?} produced no report (exit {ca})"))?;
        ensure(a == b && ca == cb, || format!("{args:?} differs between runs"))?;
        serde_json::from_str::<serde_json::Value>(&a).map_err(|e| format!("{args:?}: {e}"))?;
    }
    Ok(format!("{} commands byte-identical across reruns", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Hilbert correctness", hilbert_correctness),
        ("Koszul positive control", koszul_positive),
        ("Koszul negative control", koszul_negative),
        ("equivalence of the three tests", equivalence),
        ("filtration soundness", filtration_soundness),
        ("factorization", factorization),
        ("reg suite on ci2", reg_suite),
        ("fitz suite on ci2 and fz3", fitz_suite),
        ("minimal multiplicity on mm1", minmult_suite),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("[{}] PASS {name}: {detail} ({secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("[{}] FAIL {name}: {why} ({secs:.2}s)", k + 1)
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
