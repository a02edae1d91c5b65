//! Named end-to-end checks run by `traceforms verify --suite NAME`.
//!
//! Each suite runs a list of cases and records every mismatch (or panic) as
//! a failure instead of stopping at the first one.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{self, two_group_corpus};
use crate::field::{find_dirichlet_prime, gamma_mod2_rank, q_for_s, Field, FieldElement};
use crate::form::{
    anisotropic_dim, diagonalize, is_hyperbolic, is_isotropic, matrix, pfister, random_orthogonal_action,
    scaled_pfister, serre_decompose, trace_form_from_poly, trace_form_kummer_tower, trace_form_multiquadratic,
    wadsworth_criterion, witt_decompose, witt_equivalent, PfisterSign, Polynomial, QForm,
};
use crate::group::{build_group, GroupTable, PresentationSpec};
use crate::iwasawa::{
    condition_c_from, iwasawa_structures, lemma43_check, strength, subgroup_strengths, IwasawaStructure, Level,
};
use crate::oracle::{match_pfister_shape, predict, theorem0_e, FieldProfile, Rule};

pub const SUITES: [&str; 11] = [
    "intro",
    "example-4.4",
    "thm2-corpus",
    "lemma4.5",
    "multiquadratic",
    "kummer",
    "wadsworth",
    "serre",
    "predictor",
    "search",
    "oracles",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub wall_time_ms: u128,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let seed = self.seed.map(|s| format!(", seed {s}")).unwrap_or_default();
        format!(
            "{status} {}: {} cases, {} failures, {} ms{seed}",
            self.suite,
            self.cases,
            self.failures.len(),
            self.wall_time_ms
        )
    }
}

struct Runner {
    result: SuiteResult,
    start: Instant,
}

impl Runner {
    fn new(name: &str, seed: Option<u64>) -> Self {
        Runner {
            result: SuiteResult { suite: name.into(), seed, cases: 0, failures: Vec::new(), wall_time_ms: 0 },
            start: Instant::now(),
        }
    }

    /// Runs one case; errors and panics count as failures.
    fn check<T: Display>(&mut self, input: impl Display, expected: impl Display, got: impl FnOnce() -> Result<T, String>) {
        self.result.cases += 1;
        let expected = expected.to_string();
        let got = match catch_unwind(AssertUnwindSafe(got)) {
            Ok(Ok(v)) => v.to_string(),
            Ok(Err(e)) => format!("error: {e}"),
            Err(p) => {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                format!("panic: {msg}")
            }
        };
        if got != expected {
            self.result.failures.push(Failure { input: input.to_string(), expected, got });
        }
    }

    fn time_limit(&mut self, secs: u64) {
        let elapsed = self.start.elapsed();
        self.check(format!("wall time ≤ {secs} s"), true, || Ok::<_, String>(elapsed.as_secs_f64() <= secs as f64));
    }

    fn finish(mut self) -> SuiteResult {
        self.result.wall_time_ms = self.start.elapsed().as_millis();
        self.result
    }
}

fn s<E: Display>(e: E) -> String {
    e.to_string()
}

/// Runs a suite by name; `all` runs every suite.
pub fn run_suite(name: &str, seed: u64) -> Option<Vec<SuiteResult>> {
    if name == "all" {
        return Some(SUITES.iter().map(|n| run_one(n, seed).unwrap()).collect());
    }
    run_one(name, seed).map(|r| vec![r])
}

fn run_one(name: &str, seed: u64) -> Option<SuiteResult> {
    Some(match name {
        "intro" => intro(),
        "example-4.4" => example_44(),
        "thm2-corpus" => thm2_corpus(),
        "lemma4.5" => lemma45(),
        "multiquadratic" => multiquadratic(),
        "kummer" => kummer(),
        "wadsworth" => wadsworth(),
        "serre" => serre(seed),
        "predictor" => predictor(),
        "search" => search(),
        "oracles" => oracles(),
        _ => return None,
    })
}

fn intro() -> SuiteResult {
    let mut r = Runner::new("intro", None);
    let q = Field::rationals();
    r.check("trace form of x^4 - 4x^2 + 2 over Q", "true 4", || {
        let p = Polynomial::parse(&q, "x^4 - 4x^2 + 2").map_err(s)?;
        let (d, _) = diagonalize(&trace_form_from_poly(&q, &p).map_err(s)?).map_err(s)?;
        let target = QForm::from_ints(&q, &[1, 2, 1, 1]).map_err(s)?;
        let eq = witt_equivalent(&d, &target).map_err(s)?;
        Ok(format!("{eq} {}", anisotropic_dim(&d).map_err(s)?))
    });
    r.time_limit(1);
    r.finish()
}

fn example_44() -> SuiteResult {
    let mut r = Runner::new("example-4.4", None);
    let g = build_group(&corpus::example_44()).expect("example group builds");
    r.check("strength", 4, || strength(&g).map_err(s));
    let found = iwasawa_structures(&g, 3).unwrap_or_default();
    r.check("levels of structures with s ≥ 3", "[3, 4]", || {
        let levels: BTreeSet<u32> = found.iter().map(|st| st.level).collect();
        Ok::<_, String>(format!("{:?}", levels.into_iter().collect::<Vec<_>>()))
    });
    let a = g.find_label("a").expect("label a");
    let t = g.find_label("t").expect("label t");
    let witnesses = [
        ("(⟨a⟩, t, 3)", IwasawaStructure { a: g.closure(&[a]), t, level: 3 }),
        ("(⟨t, B⟩, a⁻¹, 4)", IwasawaStructure { a: g.closure(&[t]), t: g.inv(a), level: 4 }),
    ];
    for (name, st) in &witnesses {
        r.check(format!("structure {name} found"), true, || Ok::<_, String>(found.contains(st)));
    }
    for st in &found {
        r.check(format!("structure checks for {}", st.describe(&g)), true, || lemma43_check(&g, st, 4).map_err(s));
    }
    r.time_limit(60);
    r.finish()
}

/// Condition (c) against "Iwasawa of strength ≥ m", computed separately.
fn thm2_corpus() -> SuiteResult {
    let mut r = Runner::new("thm2-corpus", None);
    let groups = two_group_corpus();
    r.check("two-groups in corpus ≥ 30", true, || Ok::<_, String>(groups.len() >= 30));
    for (e, g) in &groups {
        let strengths = match subgroup_strengths(g) {
            Ok(x) => x,
            Err(err) => {
                r.check(&e.name, "strengths", || Err::<String, _>(err.to_string()));
                continue;
            }
        };
        // (d): abelian, or some Iwasawa structure of level ≥ m
        let top = if g.is_abelian() {
            Ok(Level::Infinite)
        } else {
            iwasawa_structures(g, 2).map(|all| all.iter().map(|x| x.level).max().map_or(Level::Finite(0), Level::Finite))
        };
        for m in 2..=5 {
            let c = condition_c_from(&strengths, m).holds;
            r.check(format!("{} m={m}", e.name), format!("(c)={c}"), || {
                let d = top.clone().map_err(s)?.at_least(m);
                Ok::<_, String>(format!("(c)={d}"))
            });
        }
    }
    r.time_limit(600);
    r.finish()
}

fn lemma45() -> SuiteResult {
    let mut r = Runner::new("lemma4.5", None);
    for (e, g) in two_group_corpus() {
        if g.is_abelian() {
            continue;
        }
        let top = match iwasawa_structures(&g, 2) {
            Ok(all) => all.iter().map(|x| x.level).max(),
            Err(err) => {
                r.check(&e.name, "structures", || Err::<String, _>(err.to_string()));
                continue;
            }
        };
        if let Some(l) = top {
            r.check(format!("{}: strength", e.name), Level::Finite(l), || strength(&g).map_err(s));
        }
    }
    r.finish()
}

fn tuples(reps: &[FieldElement], n: usize) -> Vec<Vec<FieldElement>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                reps.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect()
    })
}

fn multiquadratic() -> SuiteResult {
    let mut r = Runner::new("multiquadratic", None);
    let f5 = Field::gf(5, 1).unwrap();
    let fields = [f5.clone(), Field::gf(13, 1).unwrap(), f5.laurent(["X"]).unwrap()];
    for f in &fields {
        let reps = f.square_class_reps().unwrap();
        for n in 1..=3 {
            for slots in tuples(&reps, n) {
                let label = format!(
                    "{f}: [{}]",
                    slots.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(", ")
                );
                r.check(label, true, || {
                    let q = trace_form_multiquadratic(f, &slots).map_err(s)?;
                    let target =
                        scaled_pfister(f, &f.from_int(1 << n), &slots, PfisterSign::Minus).map_err(s)?;
                    let a = witt_decompose(&q).map_err(s)?;
                    let b = witt_decompose(&target).map_err(s)?;
                    Ok::<_, String>(q.dim() == 1 << n && a.same_class(&b))
                });
            }
        }
    }
    r.time_limit(60);
    r.finish()
}

fn kummer() -> SuiteResult {
    let mut r = Runner::new("kummer", None);
    let f = Field::gf(5, 1).unwrap().laurent(["X"]).unwrap();
    r.check("M(16) trace form over F5((X)) with a = X", "16 true 4", || {
        let gram = trace_form_kummer_tower(&f, 4, &f.var(0)).map_err(s)?;
        let (q, _) = diagonalize(&gram).map_err(s)?;
        let target = pfister(&f, &[f.from_int(2), f.var(0)], PfisterSign::Minus).map_err(s)?;
        let same = witt_decompose(&q).map_err(s)?.same_class(&witt_decompose(&target).map_err(s)?);
        Ok::<_, String>(format!("{} {same} {}", gram.dim(), anisotropic_dim(&q).map_err(s)?))
    });
    r.time_limit(30);
    r.finish()
}

fn subsets(xs: &[FieldElement]) -> Vec<Vec<FieldElement>> {
    (0..1usize << xs.len())
        .map(|mask| xs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x.clone()).collect())
        .collect()
}

fn wadsworth() -> SuiteResult {
    let mut r = Runner::new("wadsworth", None);
    let names = ["X1", "X2", "X3"];
    for depth in 1..=3 {
        let f = Field::gf(5, 1).unwrap().laurent(names[..depth].iter().copied()).unwrap();
        let vars: Vec<FieldElement> = (0..depth).map(|i| f.var(i)).collect();
        let mut inputs = subsets(&vars);
        // dependent inputs for contrast
        if depth >= 2 {
            inputs.push(vec![vars[0].clone(), vars[0].clone()]);
        }
        inputs.push(vec![f.mul(&vars[0], &vars[0])]);
        for slots in inputs {
            let label = format!(
                "{f}: [{}], s = 2",
                slots.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(", ")
            );
            let independent = gamma_mod2_rank(&f, &slots).map(|k| k == slots.len()).unwrap_or(false);
            // ≪a_1..a_k, ζ_4≫ is anisotropic exactly when it has full dimension in its class
            r.check(label, format!("independent={independent} anisotropic={independent}"), || {
                let v = wadsworth_criterion(&f, &slots, 2).map_err(s)?;
                let mut all = slots.clone();
                all.push(f.zeta(2).unwrap());
                let full = witt_decompose(&pfister(&f, &all, PfisterSign::Minus).map_err(s)?).map_err(s)?;
                let anisotropic = full.anisotropic_dim() == 1 << all.len();
                if anisotropic == v.pfister_hyperbolic {
                    return Err("verdict disagrees with the Laurent decomposition".into());
                }
                Ok::<_, String>(format!("independent={} anisotropic={anisotropic}", v.independent))
            });
        }
    }
    r.finish()
}

fn serre(seed: u64) -> SuiteResult {
    let mut r = Runner::new("serre", Some(seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields = [Field::gf(5, 1).unwrap(), Field::gf(13, 1).unwrap()];
    for i in 0..120 {
        let f = &fields[i % 2];
        let dim = rng.gen_range(1..=8);
        let (g, m) = match random_orthogonal_action(f, dim, &mut rng) {
            Ok(x) => x,
            Err(e) => {
                r.check(format!("case {i}"), "action", || Err::<String, _>(e.to_string()));
                continue;
            }
        };
        r.check(format!("case {i}: {f}, dim {dim}"), "orthogonal=true v0_hyperbolic=true", || {
            let d = serre_decompose(&g, &m).map_err(s)?;
            let mut orthogonal = d.dims().iter().sum::<usize>() == dim;
            for (lam, bl) in &d.spaces {
                for (mu, bm) in &d.spaces {
                    if f.is_one(&f.mul(lam, mu)) {
                        continue;
                    }
                    for x in bl {
                        for y in bm {
                            orthogonal &= f.is_zero(&matrix::bilinear(f, &g.entries, x, y));
                        }
                    }
                }
            }
            let v0: Vec<Vec<FieldElement>> = d.spaces[2].1.iter().chain(&d.spaces[3].1).cloned().collect();
            let v0_hyp = v0.is_empty() || {
                let (q, _) = diagonalize(&g.restrict(&v0)).map_err(s)?;
                is_hyperbolic(&q).map_err(s)?
            };
            Ok::<_, String>(format!("orthogonal={orthogonal} v0_hyperbolic={}", v0_hyp && d.v0_hyperbolic))
        });
    }
    r.finish()
}

fn group(spec: PresentationSpec) -> GroupTable {
    build_group(&spec).expect("fixture builds")
}

fn predictor() -> SuiteResult {
    let mut r = Runner::new("predictor", None);
    let m2 = FieldProfile::declared(2);
    for (name, spec) in [
        ("D8", PresentationSpec::Dihedral { order: 8 }),
        ("Q8", PresentationSpec::Quaternion { order: 8 }),
        ("SD16", PresentationSpec::Semidihedral { order: 16 }),
        ("S4", corpus::s4()),
        ("C3xQ8", corpus::find("C3xQ8").unwrap().spec),
    ] {
        let g = group(spec);
        r.check(format!("{name}, m = 2"), "forced=true thm2_agrees=true", || {
            let p = predict(&g, &m2, false).map_err(s)?;
            let (sy, _) = g.subgroup_table(&crate::group::sylow2(&g));
            let c = crate::iwasawa::thm2_classify(&sy, 2).map_err(s)?.cond_c;
            let thm0 = p.rule_fired == Rule::Thm0;
            Ok::<_, String>(format!("forced={} thm2_agrees={}", p.hyperbolic_forced, thm0 && !c))
        });
    }
    for n in 4..=6 {
        let g = group(PresentationSpec::ModularM2n { n });
        r.check(format!("M{}, m = 2", 1 << n), format!("forced=false scale={} rank=2", 1 << n), || {
            let p = predict(&g, &m2, false).map_err(s)?;
            let sh = p.shape.ok_or("no shape")?;
            Ok::<_, String>(format!("forced={} scale={} rank={}", p.hyperbolic_forced, sh.scale, sh.pfister_rank))
        });
    }
    for (e, g) in two_group_corpus().into_iter().filter(|(_, g)| g.is_abelian()) {
        r.check(format!("{}, m = 2", e.name), "forced=false", || {
            Ok::<_, String>(format!("forced={}", predict(&g, &m2, false).map_err(s)?.hyperbolic_forced))
        });
    }
    let a5 = group(corpus::a5());
    r.check("A5 declared simple", "forced=false", || {
        Ok::<_, String>(format!("forced={}", predict(&a5, &m2, true).map_err(s)?.hyperbolic_forced))
    });
    let psl = group(corpus::psl27());
    r.check("PSL(2,7) declared simple", "forced=true", || {
        Ok::<_, String>(format!("forced={}", predict(&psl, &m2, true).map_err(s)?.hyperbolic_forced))
    });
    for (e, g) in two_group_corpus() {
        let Ok(crate::oracle::Exponent::Finite(x)) = theorem0_e(&g) else { continue };
        let k = x.trailing_zeros().max(2);
        r.check(format!("{}: Thm0 at m = {k} implies (c) fails", e.name), "Thm0", || {
            Ok::<_, String>(predict(&g, &FieldProfile::declared(k), false).map_err(s)?.rule_fired.name())
        });
    }
    fixtures(&mut r);
    r.finish()
}

/// Explicit trace forms against the prediction for their group, over
/// fields whose C_i level is declared (finite fields are C1, each Laurent
/// layer adds one).
fn fixtures(r: &mut Runner) {
    let f5 = Field::gf(5, 1).unwrap();
    let f5x = f5.laurent(["X"]).unwrap();
    let elementary = |k: usize| {
        group(PresentationSpec::DirectProduct { factors: vec![PresentationSpec::Cyclic { n: 2 }; k] })
    };
    for (f, c_i, rank) in [(&f5, 1, 2), (&f5x, 2, 3), (&f5, 1, 3)] {
        let prof = FieldProfile::of_field(f).with_c_i(c_i);
        let g = elementary(rank);
        let forced = predict(&g, &prof, false).map(|p| p.hyperbolic_forced).unwrap_or(false);
        for slots in tuples(&f.square_class_reps().unwrap(), rank) {
            let label = format!(
                "(Z/2)^{rank} over {f} (C{c_i}): [{}]",
                slots.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(", ")
            );
            r.check(label, "forced=true hyperbolic=true", || {
                let q = trace_form_multiquadratic(f, &slots).map_err(s)?;
                Ok::<_, String>(format!("forced={forced} hyperbolic={}", is_hyperbolic(&q).map_err(s)?))
            });
        }
    }
    for a in [2, 3] {
        r.check(format!("M16 Galois algebra over F5 with a = {a} (C1)"), "forced=true hyperbolic=true", || {
            let g = group(PresentationSpec::ModularM2n { n: 4 });
            let p = predict(&g, &FieldProfile::of_field(&f5).with_c_i(1), false).map_err(s)?;
            let t = crate::form::KummerTower::new(&f5, 4, &f5.from_int(a)).map_err(s)?;
            let (q, _) = diagonalize(&t.gram()).map_err(s)?;
            Ok::<_, String>(format!("forced={} hyperbolic={}", p.hyperbolic_forced, is_hyperbolic(&q).map_err(s)?))
        });
    }
    for (name, f, n) in [
        ("M16 over F5((X))", f5x.clone(), 4),
        ("M32 over F25((X))", Field::gf(5, 2).unwrap().laurent(["X"]).unwrap(), 5),
    ] {
        r.check(format!("{name}: shape"), "forced=false matched=true", || {
            let g = group(PresentationSpec::ModularM2n { n });
            let p = predict(&g, &FieldProfile::of_field(&f), false).map_err(s)?;
            let sh = p.shape.clone().ok_or("no shape")?;
            let gram = trace_form_kummer_tower(&f, n, &f.var(0)).map_err(s)?;
            let (q, _) = diagonalize(&gram).map_err(s)?;
            let m = match_pfister_shape(&q, sh.scale, sh.pfister_rank).map_err(s)?;
            Ok::<_, String>(format!("forced={} matched={}", p.hyperbolic_forced, m.is_some()))
        });
    }
    for rank in 1..=3 {
        let g = elementary(rank);
        let p = predict(&g, &FieldProfile::of_field(&f5x), false);
        for slots in tuples(&f5x.square_class_reps().unwrap(), rank).into_iter().step_by(3) {
            let label = format!(
                "(Z/2)^{rank} over {f5x}: shape for [{}]",
                slots.iter().map(|x| f5x.format(x)).collect::<Vec<_>>().join(", ")
            );
            r.check(label, "matched=true", || {
                let sh = p.clone().map_err(s)?.shape.ok_or("no shape")?;
                let q = trace_form_multiquadratic(&f5x, &slots).map_err(s)?;
                let m = match_pfister_shape(&q, sh.scale, sh.pfister_rank).map_err(s)?;
                Ok::<_, String>(format!("matched={}", m.is_some()))
            });
        }
    }
}

fn search() -> SuiteResult {
    let mut r = Runner::new("search", None);
    for (sv, p, q) in [(2, 5, 5), (3, 41, 25), (4, 17, 625)] {
        r.check(format!("find_dirichlet_prime({sv})"), p, || find_dirichlet_prime(sv, 1 << 20).map_err(s));
        r.check(format!("q_for_s({sv})"), q, || q_for_s(sv).map_err(s));
        r.check(format!("2^{sv} exactly divides q_for_s({sv}) - 1"), true, || {
            let q = q_for_s(sv).map_err(s)? - 1;
            Ok::<_, String>(q % (1 << sv) == 0 && q % (1 << (sv + 1)) != 0)
        });
    }
    r.finish()
}

/// All vectors of `GF(q)^n` except zero.
fn gf_vectors(q: u32, n: usize) -> impl Iterator<Item = Vec<FieldElement>> {
    let total = (q as u64).pow(n as u32);
    (1..total).map(move |mut k| {
        (0..n)
            .map(|_| {
                let c = (k % q as u64) as u32;
                k /= q as u64;
                FieldElement::Gf(c)
            })
            .collect()
    })
}

/// Witt index of a nondegenerate form of dimension ≤ 4 by enumeration: every
/// isotropic vector lies in a maximal totally isotropic subspace.
fn brute_witt_index(form: &QForm) -> usize {
    let f = &form.field;
    let q = f.gf_context().expect("finite field").q();
    let n = form.dim();
    let g = form.gram();
    let Some(v) = gf_vectors(q, n).find(|v| f.is_zero(&form.evaluate(v))) else {
        return 0;
    };
    if n < 4 {
        return 1;
    }
    let i = v.iter().position(|c| !f.is_zero(c)).unwrap();
    let proportional = |w: &[FieldElement]| {
        let ratio = f.div(&w[i], &v[i]).unwrap();
        v.iter().zip(w).all(|(a, b)| f.mul(a, &ratio) == *b)
    };
    let plane = gf_vectors(q, n).any(|w| {
        f.is_zero(&form.evaluate(&w)) && f.is_zero(&matrix::bilinear(f, &g.entries, &v, &w)) && !proportional(&w)
    });
    1 + usize::from(plane)
}

fn oracles() -> SuiteResult {
    let mut r = Runner::new("oracles", None);
    for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
        let f = Field::gf(p, k).unwrap();
        let ctx = f.gf_context().unwrap();
        let mut reps = f.square_class_reps().unwrap();
        reps.push(FieldElement::Gf(ctx.q() - 1));
        for n in 1..=4 {
            for t in tuples(&reps, n) {
                let form = QForm::new(&f, t).unwrap();
                r.check(format!("{} over {f}", form.format()), brute_witt_index(&form), || {
                    witt_decompose(&form).map(|c| c.witt_index).map_err(s)
                });
            }
        }
    }
    let q = Field::rationals();
    let entries = [1i64, -1, 2, -2, 3, -3, 5, -5, 7, -7];
    for k in 2..=3 {
        let int_reps: Vec<FieldElement> = entries.iter().map(|&x| q.from_int(x)).collect();
        for slots in tuples(&int_reps, k) {
            let form = pfister(&q, &slots, PfisterSign::Minus).unwrap();
            r.check(format!("≪{}≫ over Q: isotropic ⇔ hyperbolic", slots.iter().map(|x| q.format(x)).collect::<Vec<_>>().join(", ")), true, || {
                Ok::<_, String>(is_isotropic(&form).map_err(s)? == is_hyperbolic(&form).map_err(s)?)
            });
        }
    }
    r.finish()
}
