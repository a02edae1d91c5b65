//! End-to-end acceptance run: one line per criterion, nonzero exit if any
//! fails. Each criterion combines the matching `verify` suite with a few
//! direct checks through the public API.

use std::process::ExitCode;
use std::time::Instant;

use traceforms::corpus::{self, two_group_corpus};
use traceforms::field::{find_dirichlet_prime, q_for_s, Field};
use traceforms::form::{
    anisotropic_dim, diagonalize, trace_form_from_poly, trace_form_kummer_tower, witt_decompose, GramMatrix,
    Polynomial, QForm,
};
use traceforms::group::{build_group, PresentationSpec};
use traceforms::iwasawa::{max_iwasawa_level, strength, thm2_classify, Level};
use traceforms::oracle::{predict, prop92_witness, FieldProfile};
use traceforms::suites::{run_suite, SuiteResult};

type Outcome = Result<String, String>;

fn suite(name: &str, seed: u64) -> Outcome {
    let results: Vec<SuiteResult> = run_suite(name, seed).ok_or(format!("no suite {name}"))?;
    let r = &results[0];
    if r.passed() {
        Ok(format!("{} cases", r.cases))
    } else {
        let first = &r.failures[0];
        Err(format!(
            "{} of {} cases failed; first: {}: expected {}, got {}",
            r.failures.len(),
            r.cases,
            first.input,
            first.expected,
            first.got
        ))
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn intro_counterexample() -> Outcome {
    let q = Field::rationals();
    let p = Polynomial::parse(&q, "x^4 - 4x^2 + 2").map_err(e)?;
    let gram = trace_form_from_poly(&q, &p).map_err(e)?;
    // power sums 4, 0, 8, 0, 24, 0, 80 of the roots
    let expected =
        GramMatrix::from_ints(&q, &[&[4, 0, 8, 0], &[0, 8, 0, 24], &[8, 0, 24, 0], &[0, 24, 0, 80]]).map_err(e)?;
    ensure(gram == expected, "Gram matrix differs from the power-sum matrix")?;
    let (d, _) = diagonalize(&gram).map_err(e)?;
    ensure(anisotropic_dim(&d).map_err(e)? == 4, "anisotropic dimension is not 4")?;
    let class = witt_decompose(&d).map_err(e)?;
    let target = witt_decompose(&QForm::from_ints(&q, &[1, 2, 1, 1]).map_err(e)?).map_err(e)?;
    ensure(class.same_class(&target), format!("class {} is not that of ⟨1, 2, 1, 1⟩", class.format()))?;
    suite("intro", 0)
}

fn example_44() -> Outcome {
    let g = build_group(&corpus::example_44()).map_err(e)?;
    ensure(g.order() == 256, "order")?;
    ensure(strength(&g).map_err(e)? == Level::Finite(4), "strength is not 4")?;
    ensure(max_iwasawa_level(&g).map_err(e)? == Some(Level::Finite(4)), "max Iwasawa level is not 4")?;
    suite("example-4.4", 0)
}

fn thm2_corpus() -> Outcome {
    let groups = two_group_corpus();
    ensure(groups.len() >= 30, format!("only {} two-groups", groups.len()))?;
    ensure(groups.iter().all(|(_, g)| g.order() <= 256), "a corpus two-group exceeds order 256")?;
    // thm2_classify asserts (c) ⇔ (d) internally
    for (entry, g) in &groups {
        for m in 2..=5 {
            thm2_classify(g, m).map_err(|err| format!("{} m={m}: {err}", entry.name))?;
        }
    }
    suite("thm2-corpus", 0)
}

fn lemma45() -> Outcome {
    suite("lemma4.5", 0)
}

fn multiquadratic() -> Outcome {
    suite("multiquadratic", 0)
}

fn kummer_witness() -> Outcome {
    let f = Field::gf(5, 1).map_err(e)?.laurent(["X"]).map_err(e)?;
    let gram = trace_form_kummer_tower(&f, 4, &f.var(0)).map_err(e)?;
    ensure(gram.dim() == 16, "dimension is not 16")?;
    let w = prop92_witness(&f, 4, None).map_err(e)?;
    ensure(w.matches && !w.is_hyperbolic(), "trace class does not match ⟨16⟩ ⊗ ≪2, X≫")?;
    ensure(w.trace_class.anisotropic_dim() == 4, "anisotropic dimension is not 4")?;
    suite("kummer", 0)
}

fn wadsworth() -> Outcome {
    suite("wadsworth", 0)
}

fn serre() -> Outcome {
    suite("serre", 0)?;
    suite("serre", 1)
}

fn predictor() -> Outcome {
    let m2 = FieldProfile::declared(2);
    let d8 = build_group(&PresentationSpec::Dihedral { order: 8 }).map_err(e)?;
    ensure(predict(&d8, &m2, false).map_err(e)?.hyperbolic_forced, "D8 not forced")?;
    let a5 = corpus::find("A5").unwrap().build().map_err(e)?;
    ensure(!predict(&a5, &m2, true).map_err(e)?.hyperbolic_forced, "A5 forced")?;
    let psl = corpus::find("PSL(2,7)").unwrap().build().map_err(e)?;
    ensure(predict(&psl, &m2, true).map_err(e)?.hyperbolic_forced, "PSL(2,7) not forced")?;
    suite("predictor", 0)
}

fn searches() -> Outcome {
    let primes: Vec<u64> = [2, 3, 4].iter().map(|&s| find_dirichlet_prime(s, 1 << 20)).collect::<Result<_, _>>().map_err(e)?;
    ensure(primes == [5, 41, 17], format!("primes {primes:?}"))?;
    let qs: Vec<u64> = [2, 3, 4].iter().map(|&s| q_for_s(s)).collect::<Result<_, _>>().map_err(e)?;
    ensure(qs == [5, 25, 625], format!("q values {qs:?}"))?;
    suite("search", 0)
}

fn oracles() -> Outcome {
    suite("oracles", 0)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("intro counterexample x^4 - 4x^2 + 2", intro_counterexample),
        ("order-256 metacyclic example", example_44),
        ("(c) ⇔ (d) over the corpus, m = 2..5", thm2_corpus),
        ("strength = max Iwasawa level", lemma45),
        ("multiquadratic trace forms", multiquadratic),
        ("M(16) trace form over F5((X))", kummer_witness),
        ("valuation independence vs anisotropy", wadsworth),
        ("eigenspaces of order-4 isometries", serre),
        ("predictor coherence", predictor),
        ("parameter searches", searches),
        ("Witt engine oracles", oracles),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}, {ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
