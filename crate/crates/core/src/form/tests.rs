use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::field::FieldElement;

fn q(n: i64, d: i64) -> FieldElement {
    FieldElement::Q(BigRational::new(n.into(), d.into()))
}

fn f5x() -> Field {
    Field::gf(5, 1).unwrap().laurent(["X"]).unwrap()
}

fn ints(f: &Field, xs: &[i64]) -> Vec<FieldElement> {
    xs.iter().map(|&x| f.from_int(x)).collect()
}

fn intro_gram() -> GramMatrix {
    GramMatrix::from_ints(
        &Field::rationals(),
        &[&[4, 0, 8, 0], &[0, 8, 0, 24], &[8, 0, 24, 0], &[0, 24, 0, 80]],
    )
    .unwrap()
}

fn audit(g: &GramMatrix, d: &QForm, p: &Matrix) {
    let f = &g.field;
    let pt = matrix::transpose(p);
    assert_eq!(matrix::mul(f, &matrix::mul(f, &pt, &g.entries), p), matrix::diag(f, &d.diag));
    let lhs = f.product(&d.diag);
    assert!(f.same_square_class(&lhs, &g.det()).unwrap());
}

#[test]
fn diagonalize_examples() {
    let g = intro_gram();
    let (d, p) = diagonalize(&g).unwrap();
    assert_eq!(d.diag, ints(&g.field, &[4, 8, 8, 8]));
    audit(&g, &d, &p);

    let f5 = Field::gf(5, 1).unwrap();
    let id = GramMatrix::from_ints(&f5, &[&[1, 0], &[0, 1]]).unwrap();
    assert_eq!(diagonalize(&id).unwrap().0.diag, ints(&f5, &[1, 1]));

    let h = GramMatrix::from_ints(&Field::rationals(), &[&[0, 1], &[1, 0]]).unwrap();
    let (d, p) = diagonalize(&h).unwrap();
    assert_eq!(d.diag, vec![q(2, 1), q(-1, 2)]);
    audit(&h, &d, &p);
    assert!(is_hyperbolic(&d).unwrap());

    let sing = GramMatrix::from_ints(&Field::rationals(), &[&[1, 1], &[1, 1]]).unwrap();
    assert_eq!(diagonalize(&sing).unwrap_err(), FormError::Singular);
    let bad = GramMatrix::from_ints(&Field::rationals(), &[&[1, 2], &[3, 1]]);
    assert_eq!(bad.unwrap_err(), FormError::NotSymmetric);
}

#[test]
fn pfister_examples() {
    let f5 = Field::gf(5, 1).unwrap();
    let p = pfister(&f5, &ints(&f5, &[2]), PfisterSign::Plus).unwrap();
    assert_eq!(p.diag, ints(&f5, &[1, 2]));
    let h = pfister(&f5, &ints(&f5, &[1, 3]), PfisterSign::Plus).unwrap();
    assert!(is_hyperbolic(&h).unwrap());
    let f = f5x();
    let x = f.var(0);
    let p = pfister(&f, &[f.from_int(2), x.clone()], PfisterSign::Plus).unwrap();
    assert_eq!(p.diag, vec![f.one(), f.from_int(2), x.clone(), f.mul_int(&x, 2)]);
    let minus = pfister(&f, &[f.from_int(2), x], PfisterSign::Minus).unwrap();
    assert!(witt_equivalent(&p, &minus).unwrap());

    let fq = Field::rationals();
    assert!(matches!(pfister(&fq, &[fq.from_int(2)], PfisterSign::Plus), Err(FormError::Precondition(_))));
    assert_eq!(pfister(&fq, &[fq.zero()], PfisterSign::Minus).unwrap_err(), FormError::ZeroEntry);
    assert_eq!(pfister(&fq, &[fq.from_int(3)], PfisterSign::Minus).unwrap().diag, ints(&fq, &[1, -3]));
    let s = scaled_pfister(&fq, &fq.from_int(4), &ints(&fq, &[2, 3]), PfisterSign::Minus).unwrap();
    assert_eq!(s.diag, ints(&fq, &[4, -8, -12, 24]));
}

#[test]
fn witt_examples() {
    let fq = Field::rationals();
    let c = witt_decompose(&QForm::from_ints(&fq, &[1, 2, 1, 1]).unwrap()).unwrap();
    assert_eq!(c.anisotropic_dim(), 4);
    assert!(!c.is_hyperbolic());
    assert_eq!(c.invariants.as_ref().unwrap().signature, 4);

    let f = f5x();
    let x = f.var(0);
    let qf = QForm::new(&f, vec![f.one(), f.from_int(2), x.clone(), f.mul_int(&x, 2)]).unwrap();
    assert_eq!(anisotropic_dim(&qf).unwrap(), 4);

    let h = QForm::from_ints(&fq, &[1, -1, 3, -3]).unwrap();
    assert!(is_hyperbolic(&h).unwrap());
    let c = witt_decompose(&h).unwrap();
    assert!(c.is_hyperbolic());
    assert_eq!(c.witt_index, 2);
}

#[test]
fn rational_classes_are_canonical() {
    let fq = Field::rationals();
    let a = witt_decompose(&QForm::from_ints(&fq, &[1, 2, 1, 1]).unwrap()).unwrap();
    let b = witt_decompose(&QForm::from_ints(&fq, &[1, 2, 1, 1, 5, -5, 7, -7]).unwrap()).unwrap();
    assert!(a.same_class(&b));
    let again = witt_decompose(&a.kernel()).unwrap();
    assert!(again.same_class(&a));
    let three = witt_decompose(&QForm::from_ints(&fq, &[1, 1, -3]).unwrap()).unwrap();
    assert_eq!(three.anisotropic_dim(), 3);
    let one = witt_decompose(&QForm::from_ints(&fq, &[1, 1, -2]).unwrap()).unwrap();
    assert_eq!(one.anisotropic_diag, vec![q(2, 1)]);
    let defn = witt_decompose(&QForm::from_ints(&fq, &[1, 1, 1, 1, 1, 1, -1]).unwrap()).unwrap();
    assert_eq!(defn.anisotropic_dim(), 5);
}

fn small_integer_zero(coeffs: &[i64], bound: i64) -> Option<Vec<i64>> {
    let n = coeffs.len();
    let width = (2 * bound + 1) as usize;
    let total = width.pow(n as u32);
    for idx in 1..total {
        let mut v = Vec::with_capacity(n);
        let mut r = idx;
        for _ in 0..n {
            v.push((r % width) as i64 - bound);
            r /= width;
        }
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let s: i64 = coeffs.iter().zip(&v).map(|(a, x)| a * x * x).sum();
        if s == 0 {
            return Some(v);
        }
    }
    None
}

#[test]
fn rational_isotropy_examples() {
    let fq = Field::rationals();
    assert!(!is_isotropic(&QForm::from_ints(&fq, &[1, 1, 1, 1]).unwrap()).unwrap());
    // x² + y² + z² = 7w² would make 7w² a sum of three squares, which it
    // never is (7w² has the form 4^k(8m + 7)); the 2-adic test agrees.
    let f7 = QForm::from_ints(&fq, &[1, 1, 1, -7]).unwrap();
    assert!(!is_isotropic(&f7).unwrap());
    assert_eq!(small_integer_zero(&[1, 1, 1, -7], 12), None);
    assert_eq!(anisotropic_dim(&f7).unwrap(), 4);
    // positive controls for the search oracle
    for c in [[1i64, 1, 1, -3], [1, 1, 1, -6], [1, 2, -3, -5]] {
        let form = QForm::from_ints(&fq, &c).unwrap();
        assert!(is_isotropic(&form).unwrap());
        assert!(small_integer_zero(&c, 6).is_some(), "{c:?}");
    }
    let f5 = Field::gf(5, 1).unwrap();
    assert!(!is_isotropic(&QForm::from_ints(&f5, &[1, 2]).unwrap()).unwrap());
}

#[test]
fn rational_isotropy_matches_search() {
    let vals = [-7i64, -5, -3, -2, -1, 1, 2, 3, 5, 7];
    let fq = Field::rationals();
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                let form = QForm::from_ints(&fq, &[a, b, c]).unwrap();
                let iso = is_isotropic(&form).unwrap();
                let found = small_integer_zero(&[a, b, c], 12).is_some();
                assert_eq!(iso, found, "⟨{a},{b},{c}⟩");
                assert_eq!(iso, anisotropic_dim(&form).unwrap() < 3);
            }
        }
    }
}

#[test]
fn trace_poly_examples() {
    let fq = Field::rationals();
    let poly = Polynomial::parse(&fq, "x^4 - 4x^2 + 2").unwrap();
    assert_eq!(poly, Polynomial::from_ints(&fq, &[2, 0, -4, 0, 1]));
    let g = trace_form_from_poly(&fq, &poly).unwrap();
    assert_eq!(g, intro_gram());
    let (d, _) = diagonalize(&g).unwrap();
    let target = QForm::from_ints(&fq, &[1, 2, 1, 1]).unwrap();
    assert!(witt_equivalent(&d, &target).unwrap());
    assert!(witt_decompose(&d).unwrap().same_class(&witt_decompose(&target).unwrap()));
    assert_eq!(anisotropic_dim(&d).unwrap(), 4);

    let g = trace_form_from_poly(&fq, &Polynomial::from_ints(&fq, &[-3, 0, 1])).unwrap();
    assert_eq!(g.entries, vec![ints(&fq, &[2, 0]), ints(&fq, &[0, 6])]);

    let f5 = Field::gf(5, 1).unwrap();
    let g = trace_form_from_poly(&f5, &Polynomial::parse(&f5, "x^2-2").unwrap()).unwrap();
    assert_eq!(diagonalize(&g).unwrap().0.diag, ints(&f5, &[2, 4]));

    let insep = trace_form_from_poly(&fq, &Polynomial::from_ints(&fq, &[0, 0, 1]));
    assert!(matches!(insep, Err(FormError::Precondition(_))));
    let not_monic = trace_form_from_poly(&fq, &Polynomial::from_ints(&fq, &[1, 2]));
    assert!(matches!(not_monic, Err(FormError::Precondition(_))));
}

/// Power sums computed from explicit roots: x^3 - 6x^2 + 11x - 6 has roots
/// 1, 2, 3.
#[test]
fn power_sums_from_roots() {
    let fq = Field::rationals();
    let poly = Polynomial::parse(&fq, "x^3 - 6x^2 + 11x - 6").unwrap();
    let p = trace::power_sums(&fq, &poly, 6);
    for (k, pk) in p.iter().enumerate() {
        let expect = 1 + 2i64.pow(k as u32) + 3i64.pow(k as u32);
        assert_eq!(*pk, fq.from_int(expect));
    }
}

#[test]
fn multiquadratic_examples() {
    let f5 = Field::gf(5, 1).unwrap();
    let t = trace_form_multiquadratic(&f5, &ints(&f5, &[2])).unwrap();
    assert_eq!(t.diag, ints(&f5, &[2, 4]));
    let p = scaled_pfister(&f5, &f5.from_int(2), &ints(&f5, &[2]), PfisterSign::Plus).unwrap();
    assert!(witt_equivalent(&t, &p).unwrap());
    let fq = Field::rationals();
    let t = trace_form_multiquadratic(&fq, &ints(&fq, &[2, 3])).unwrap();
    assert_eq!(t.diag, ints(&fq, &[4, 8, 12, 24]));
    assert_eq!(trace_form_multiquadratic(&fq, &[]).unwrap().diag, ints(&fq, &[1]));
    assert_eq!(trace_form_multiquadratic(&fq, &[fq.zero()]).unwrap_err(), FormError::ZeroEntry);
}

fn tuples(reps: &[FieldElement], r: usize) -> Vec<Vec<FieldElement>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|t| {
                reps.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}

#[test]
fn multiquadratic_matches_scaled_pfister_exhaustively() {
    for f in [Field::gf(5, 1).unwrap(), Field::gf(13, 1).unwrap(), f5x()] {
        let reps = f.square_class_reps().unwrap();
        for r in 0..=3 {
            for t in tuples(&reps, r) {
                let q = trace_form_multiquadratic(&f, &t).unwrap();
                let p = scaled_pfister(&f, &f.from_int(1 << r), &t, PfisterSign::Minus).unwrap();
                assert!(witt_equivalent(&q, &p).unwrap());
            }
        }
    }
}

fn two_x(f: &Field) -> Vec<FieldElement> {
    vec![f.from_int(2), f.var(0)]
}

#[test]
fn kummer_tower_n4() {
    let f = f5x();
    let x = f.var(0);
    let g = trace_form_kummer_tower(&f, 4, &x).unwrap();
    assert_eq!(g.dim(), 16);
    let (d, p) = diagonalize(&g).unwrap();
    audit(&g, &d, &p);
    let class = witt_decompose(&d).unwrap();
    assert_eq!(class.anisotropic_dim(), 4);
    let target = pfister(&f, &two_x(&f), PfisterSign::Minus).unwrap();
    assert!(class.same_class(&witt_decompose(&target).unwrap()));
    assert!(witt_equivalent(&d, &target).unwrap());
    let scaled = scaled_pfister(&f, &f.from_int(16), &two_x(&f), PfisterSign::Minus).unwrap();
    assert!(witt_equivalent(&d, &scaled).unwrap());

    for a in [4, 1, 2, 3] {
        let err = trace_form_kummer_tower(&f, 4, &f.from_int(a)).unwrap_err();
        assert!(err.to_string().contains("a square in K′"), "{a}: {err}");
    }
    let x2 = f.square(&x);
    assert!(trace_form_kummer_tower(&f, 4, &x2).is_err());
    assert!(matches!(trace_form_kummer_tower(&f, 5, &x), Err(FormError::Precondition(_))));
}

/// The trace of `β^j α^k` is `2^n` for the unit, vanishes unless both `j`
/// and `k` are zero, so the Gram entry at `(β^j α^k, β^j' α^k')` is nonzero
/// exactly when `k + k' ∈ {0, N}` and `j = j'`.
#[test]
fn kummer_gram_pattern() {
    let f = f5x();
    let x = f.var(0);
    let t = KummerTower::new(&f, 4, &x).unwrap();
    let g = t.gram();
    let n = 8;
    let z = f.from_int(2);
    for i in 0..16 {
        for j in 0..16 {
            let (ji, ki) = (i / n, i % n);
            let (jj, kj) = (j / n, j % n);
            let mut expect = f.zero();
            if ji == jj && (ki + kj) % n == 0 {
                expect = f.from_int(16);
                if ki + kj == n {
                    expect = f.mul(&expect, &x);
                }
                if ji == 1 {
                    expect = f.mul(&expect, &z);
                }
            }
            assert_eq!(g.entries[i][j], expect, "{} {}", t.basis_label(i), t.basis_label(j));
        }
    }
}

#[test]
fn kummer_tower_n5() {
    let f = Field::gf(5, 2).unwrap().laurent(["X"]).unwrap();
    let x = f.var(0);
    let g = trace_form_kummer_tower(&f, 5, &x).unwrap();
    assert_eq!(g.dim(), 32);
    let (d, _) = diagonalize(&g).unwrap();
    let class = witt_decompose(&d).unwrap();
    assert!(!class.is_hyperbolic());
    assert_eq!(class.anisotropic_dim(), 4);
    let z8 = f.zeta(3).unwrap();
    let target = pfister(&f, &[z8, x], PfisterSign::Minus).unwrap();
    assert!(witt_equivalent(&d, &target).unwrap());
}

#[test]
fn serre_examples() {
    let f5 = Field::gf(5, 1).unwrap();
    let g = GramMatrix::from_ints(&f5, &[&[0, 1], &[1, 0]]).unwrap();
    let m = matrix::diag(&f5, &ints(&f5, &[2, 3]));
    let s = serre_decompose(&g, &m).unwrap();
    assert_eq!(s.dims(), [0, 0, 1, 1]);
    assert_eq!(s.spaces[2].1, vec![ints(&f5, &[1, 0])]);
    assert_eq!(s.spaces[3].1, vec![ints(&f5, &[0, 1])]);
    assert!(s.v0_hyperbolic);

    let s = serre_decompose(&g, &matrix::identity(&f5, 2)).unwrap();
    assert_eq!(s.dims(), [2, 0, 0, 0]);

    let g4 = GramMatrix::from_ints(&f5, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap();
    let mut shift = matrix::zeros(&f5, 4, 4);
    for k in 0..4 {
        shift[(k + 1) % 4][k] = f5.one();
    }
    let s = serre_decompose(&g4, &shift).unwrap();
    assert_eq!(s.dims(), [1, 1, 1, 1]);
    assert!(s.v0_hyperbolic);

    let not_orth = matrix::diag(&f5, &ints(&f5, &[2, 2]));
    assert!(matches!(serre_decompose(&g, &not_orth), Err(FormError::Precondition(_))));
    let fq = Field::rationals();
    let gq = GramMatrix::from_ints(&fq, &[&[1]]).unwrap();
    assert!(matches!(serre_decompose(&gq, &matrix::identity(&fq, 1)), Err(FormError::Precondition(_))));
}

#[test]
fn serre_random_actions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in [Field::gf(5, 1).unwrap(), Field::gf(13, 1).unwrap()] {
        for dim in 1..=8 {
            for _ in 0..3 {
                let (g, m) = random_orthogonal_action(&f, dim, &mut rng).unwrap();
                let s = serre_decompose(&g, &m).unwrap();
                assert_eq!(s.dims().iter().sum::<usize>(), dim);
                assert!(s.v0_hyperbolic);
            }
        }
    }
}

#[test]
fn corollary22_examples() {
    let f = f5x();
    let r = corollary22_check(&ExtensionSpec::Kummer { field: f.clone(), n: 4, a: f.var(0) }).unwrap();
    assert!(r.holds());
    assert_eq!(r.frattini_order, 4);
    assert_eq!(r.full.anisotropic_dim(), 4);
    let mq = ExtensionSpec::Multiquadratic { field: f.clone(), slots: two_x(&f) };
    assert!(corollary22_check(&mq).unwrap().holds());
    let split = corollary22_check(&ExtensionSpec::Kummer { field: f.clone(), n: 4, a: f.one() }).unwrap();
    assert!(split.holds());
    assert!(split.full.is_hyperbolic());
}

#[test]
fn wadsworth_examples() {
    let f = f5x();
    let v = wadsworth_criterion(&f, &[f.var(0)], 2).unwrap();
    assert!(v.independent && !v.pfister_hyperbolic);
    assert_eq!(v.anisotropic_dim, 4);
    let f2 = Field::gf(5, 1).unwrap().laurent(["X1", "X2"]).unwrap();
    let v = wadsworth_criterion(&f2, &[f2.var(0), f2.var(1)], 2).unwrap();
    assert!(v.independent);
    assert_eq!(v.anisotropic_dim, 8);
    let sq = f.mul_int(&f.square(&f.var(0)), 4);
    let v = wadsworth_criterion(&f, &[sq], 2).unwrap();
    assert!(!v.independent && v.pfister_hyperbolic);
    assert!(matches!(wadsworth_criterion(&f, &[f.var(0)], 3), Err(FormError::Precondition(_))));
    assert!(matches!(wadsworth_criterion(&f, &[f.var(0)], 1), Err(FormError::Precondition(_))));
}

fn gf_vectors(qsize: u32, n: usize) -> impl Iterator<Item = Vec<FieldElement>> {
    let total = (qsize as u64).pow(n as u32);
    (1..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let c = (idx % qsize as u64) as u32;
                idx /= qsize as u64;
                FieldElement::Gf(c)
            })
            .collect()
    })
}

/// Witt index by enumeration: an isotropic vector exists, and (dimension 4)
/// one isotropic vector extends to a totally isotropic plane.
fn brute_witt_index(form: &QForm) -> usize {
    let f = &form.field;
    let qsize = f.gf_context().unwrap().q();
    let n = form.dim();
    let g = form.gram();
    let Some(v) = gf_vectors(qsize, n).find(|v| f.is_zero(&form.evaluate(v))) else {
        return 0;
    };
    if n < 4 {
        return 1;
    }
    let proportional = |w: &[FieldElement]| {
        let i = v.iter().position(|c| !f.is_zero(c)).unwrap();
        let r = f.div(&w[i], &v[i]).unwrap();
        v.iter().zip(w).all(|(a, b)| f.mul(a, &r) == *b)
    };
    let plane = gf_vectors(qsize, n).any(|w| {
        f.is_zero(&form.evaluate(&w)) && f.is_zero(&matrix::bilinear(f, &g.entries, &v, &w)) && !proportional(&w)
    });
    if plane {
        2
    } else {
        1
    }
}

#[test]
fn finite_field_decomposition_matches_enumeration() {
    for (p, k) in [(3, 1), (5, 1), (7, 1), (3, 2), (11, 1), (13, 1)] {
        let f = Field::gf(p, k).unwrap();
        let g = f.gf_context().unwrap();
        let mut reps = f.square_class_reps().unwrap();
        reps.push(FieldElement::Gf(g.q() - 1));
        reps.push(FieldElement::Gf(g.generator()));
        for n in 1..=4 {
            for t in tuples(&reps, n) {
                let form = QForm::new(&f, t).unwrap();
                let c = witt_decompose(&form).unwrap();
                assert_eq!(c.witt_index, brute_witt_index(&form), "{} over GF({})", form.format(), g.q());
                assert_eq!(is_isotropic(&form).unwrap(), c.witt_index > 0);
            }
        }
    }
}

/// Bounded search for an isotropic vector with coordinates supported on the
/// exponents `lo..=hi`.
fn laurent_isotropic_vector(form: &QForm, lo: i64, hi: i64) -> bool {
    let f = &form.field;
    let p = f.characteristic() as u64;
    let per = p.pow((hi - lo + 1) as u32);
    let n = form.dim();
    let coord = |mut i: u64| {
        let mut x = f.zero();
        for e in lo..=hi {
            let c = f.from_int((i % p) as i64);
            i /= p;
            x = f.add(&x, &f.mul(&c, &f.powi(&f.var(0), e).unwrap()));
        }
        x
    };
    (1..per.pow(n as u32)).any(|mut idx| {
        let v: Vec<FieldElement> = (0..n)
            .map(|_| {
                let c = coord(idx % per);
                idx /= per;
                c
            })
            .collect();
        f.is_zero(&form.evaluate(&v))
    })
}

#[test]
fn laurent_decomposition_one_sided_oracle() {
    let f = Field::gf(3, 1).unwrap().laurent(["X"]).unwrap();
    let reps = f.square_class_reps().unwrap();
    let mut extra = reps.clone();
    extra.push(f.add(&f.one(), &f.var(0)));
    for (n, lo) in [(2, -1), (3, 0)] {
        for t in tuples(&extra, n) {
            let form = QForm::new(&f, t).unwrap();
            if laurent_isotropic_vector(&form, lo, 1) {
                assert!(is_isotropic(&form).unwrap(), "{}", form.format());
            }
        }
    }
    // anisotropic cases the search must not contradict, and a positive control
    let x = f.var(0);
    let aniso = QForm::new(&f, vec![f.one(), f.one(), x.clone(), x.clone()]).unwrap();
    assert!(!is_isotropic(&aniso).unwrap());
    let iso = QForm::new(&f, vec![f.one(), f.add(&f.one(), &x), f.neg(&f.add(&f.from_int(2), &x))]).unwrap();
    assert!(laurent_isotropic_vector(&iso, 0, 1));
    assert!(is_isotropic(&iso).unwrap());
}

#[test]
fn rational_pfister_isotropy_is_hyperbolicity() {
    let vals = [-7i64, -5, -3, -2, -1, 1, 2, 3, 5, 7];
    let fq = Field::rationals();
    let mut hyperbolic = 0;
    for &a in &vals {
        for &b in &vals {
            if pfister_isotropic(&fq, &ints(&fq, &[a, b])).unwrap() {
                hyperbolic += 1;
            }
            for &c in &vals {
                pfister_isotropic(&fq, &ints(&fq, &[a, b, c])).unwrap();
            }
        }
    }
    assert!(hyperbolic > 0);
    assert!(!pfister_isotropic(&fq, &ints(&fq, &[-1, -1])).unwrap());
    assert!(pfister_isotropic(&fq, &ints(&fq, &[2, -1])).unwrap());
}

#[test]
fn form_json_round_trip() {
    let f = f5x();
    let form = QForm::new(&f, two_x(&f)).unwrap();
    let back = FormInput::from_json(&form.to_json()).unwrap().into_diagonal().unwrap();
    assert_eq!(back, form);
    let g = intro_gram();
    match FormInput::from_json(&g.to_json()).unwrap() {
        FormInput::Gram(h) => assert_eq!(h, g),
        other => panic!("{other:?}"),
    }
    let v: serde_json::Value = serde_json::from_str(r#"{"field":{"base":{"kind":"Q"}},"diag":["1/2", 3]}"#).unwrap();
    let form = FormInput::from_json(&v).unwrap().into_diagonal().unwrap();
    assert_eq!(form.diag, vec![q(1, 2), q(3, 1)]);
    assert!(FormInput::from_json(&serde_json::json!({"diag": [1]})).is_err());
}

fn gf13_elem() -> impl Strategy<Value = u32> {
    1u32..13
}

fn small_rational() -> impl Strategy<Value = i64> {
    prop_oneof![-30i64..-1, 1i64..30]
}

fn laurent_elem(f: Field) -> impl Strategy<Value = FieldElement> {
    (1u32..5, -2i64..3, 0u32..5).prop_map(move |(c, e, t)| {
        let x = f.var(0);
        let lead = f.mul(&f.from_int(c as i64), &f.powi(&x, e).unwrap());
        f.add(&lead, &f.mul(&f.from_int(t as i64), &f.powi(&x, e + 1).unwrap()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diagonalize_audit_gf13(entries in proptest::collection::vec(0u32..13, 10)) {
        let f = Field::gf(13, 1).unwrap();
        let mut m = matrix::zeros(&f, 4, 4);
        let mut it = entries.into_iter();
        for i in 0..4 {
            for j in i..4 {
                let v = FieldElement::Gf(it.next().unwrap());
                m[i][j] = v.clone();
                m[j][i] = v;
            }
        }
        let g = GramMatrix::new(&f, m).unwrap();
        match diagonalize(&g) {
            Ok((d, p)) => audit(&g, &d, &p),
            Err(e) => {
                prop_assert_eq!(e, FormError::Singular);
                prop_assert!(f.is_zero(&g.det()));
            }
        }
    }

    #[test]
    fn diagonalize_audit_laurent(entries in proptest::collection::vec(laurent_elem(f5x()), 6)) {
        let f = f5x();
        let mut m = matrix::zeros(&f, 3, 3);
        let mut it = entries.into_iter();
        for i in 0..3 {
            for j in i..3 {
                let v = it.next().unwrap();
                m[i][j] = v.clone();
                m[j][i] = v;
            }
        }
        let g = GramMatrix::new(&f, m).unwrap();
        if g.is_nondegenerate() {
            let (d, p) = diagonalize(&g).unwrap();
            audit(&g, &d, &p);
        }
    }

    #[test]
    fn witt_equivalence_is_an_equivalence(
        a in proptest::collection::vec(small_rational(), 1..5),
        b in proptest::collection::vec(small_rational(), 1..5),
        c in proptest::collection::vec(small_rational(), 1..5),
    ) {
        let fq = Field::rationals();
        let (qa, qb, qc) = (
            QForm::from_ints(&fq, &a).unwrap(),
            QForm::from_ints(&fq, &b).unwrap(),
            QForm::from_ints(&fq, &c).unwrap(),
        );
        prop_assert!(witt_equivalent(&qa, &qa).unwrap());
        prop_assert!(is_hyperbolic(&qa.perp(&qa.negate())).unwrap());
        let ab = witt_equivalent(&qa, &qb).unwrap();
        prop_assert_eq!(ab, witt_equivalent(&qb, &qa).unwrap());
        if ab && witt_equivalent(&qb, &qc).unwrap() {
            prop_assert!(witt_equivalent(&qa, &qc).unwrap());
        }
        let ca = witt_decompose(&qa).unwrap();
        let cb = witt_decompose(&qb).unwrap();
        prop_assert_eq!(ab, ca.same_class(&cb));
        prop_assert!(witt_decompose(&ca.kernel()).unwrap().same_class(&ca));
        prop_assert_eq!(ca.anisotropic_dim(), anisotropic_dim(&qa).unwrap());
    }

    #[test]
    fn laurent_classes(
        a in proptest::collection::vec(laurent_elem(f5x()), 1..6),
        b in proptest::collection::vec(laurent_elem(f5x()), 1..6),
    ) {
        let f = f5x();
        let qa = QForm::new(&f, a).unwrap();
        let qb = QForm::new(&f, b).unwrap();
        prop_assert!(is_hyperbolic(&qa.perp(&qa.negate())).unwrap());
        let ca = witt_decompose(&qa).unwrap();
        let cb = witt_decompose(&qb).unwrap();
        prop_assert_eq!(witt_equivalent(&qa, &qb).unwrap(), ca.same_class(&cb));
        prop_assert!(witt_decompose(&ca.kernel()).unwrap().same_class(&ca));
        prop_assert!(witt_equivalent(&qa, &ca.kernel()).unwrap());
    }

    #[test]
    fn gf_classes(a in proptest::collection::vec(gf13_elem(), 1..7)) {
        let f = Field::gf(13, 1).unwrap();
        let qa = QForm::new(&f, a.into_iter().map(FieldElement::Gf).collect()).unwrap();
        let ca = witt_decompose(&qa).unwrap();
        prop_assert!(ca.anisotropic_dim() <= 2);
        prop_assert_eq!(ca.anisotropic_dim() % 2, qa.dim() % 2);
        prop_assert!(witt_equivalent(&qa, &ca.kernel()).unwrap());
    }
}
