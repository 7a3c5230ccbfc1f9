//! Acceptance run: one line per criterion.
//!
//! A few criteria contain a literal statement that the exact engine does not
//! reproduce (a sign or indexing slip in a displayed formula). Those checks
//! are marked `deviation`: they still run and still print FAIL, but the
//! process exits non-zero only when the outcome is unexpected, i.e. an
//! ordinary check fails or a deviation check starts passing.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use ggc::numeric::{self, EuclidSymbol, Grid, MetaplecticKind};
use ggc_core::expansion::{adjoint_expansion, compose_expansion, Expansion, Factor, FormalSymbolTerm, Sym};
use ggc_core::group::{catalog, GroupLaw};
use ggc_core::invariant::{check_duality, conversion_polys, left_vf, verify_conversion, CanonicalBasis, ConversionKind, DiffOp, InvariantFields};
use ggc_core::poly::{blocks, monomials_up_to_weight, parse_rational, rat};
use ggc_core::tau::{composition_coeffs, mr_tau, Automorphism, BuiltinTau, CoefficientTable, MatrixRep, QuantizingFunction};
use ggc_core::{MultiIndex, Polynomial, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CATALOG: &[&str] = &["heisenberg1", "heisenberg2", "abelian1", "abelian2", "abelian3", "engel", "free23"];

#[derive(Default)]
struct Checks {
    items: Vec<Item>,
}

struct Item {
    name: String,
    ok: bool,
    deviation: bool,
    note: String,
}

impl Checks {
    fn check(&mut self, name: impl Into<String>, ok: bool, note: impl Into<String>) {
        self.items.push(Item { name: name.into(), ok, deviation: false, note: note.into() });
    }

    fn deviation(&mut self, name: impl Into<String>, ok: bool, note: impl Into<String>) {
        self.items.push(Item { name: name.into(), ok, deviation: true, note: note.into() });
    }

    fn passed(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }

    fn unexpected(&self) -> Vec<&Item> {
        self.items.iter().filter(|i| i.ok == i.deviation).collect()
    }
}

fn law(name: &str) -> GroupLaw {
    GroupLaw::bch(&catalog::by_name(name).unwrap()).unwrap()
}

fn basis(l: &GroupLaw, m: u32) -> CanonicalBasis {
    CanonicalBasis::build(&InvariantFields::new(l), m).unwrap()
}

fn p(s: &str) -> Polynomial {
    s.parse().unwrap()
}

fn x(j: usize) -> Polynomial {
    Polynomial::var_in(blocks::X, j as u32)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Rational>> {
    (0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))).collect()).collect()
}

fn half_log(l: &GroupLaw) -> QuantizingFunction {
    QuantizingFunction::builtin(l, BuiltinTau::HalfLog)
}

fn c1_group_law() -> Checks {
    let start = Instant::now();
    let mut c = Checks::default();
    for n in 1..=2 {
        let l = law(&format!("heisenberg{n}"));
        let mut want: Vec<Polynomial> = (1..=2 * n + 1).map(|j| p(&format!("x{j} + y{j}"))).collect();
        for j in 1..=n {
            want[2 * n] += p(&format!("1/2 x{j} y{k} - 1/2 x{k} y{j}", k = n + j));
        }
        c.check(format!("H{n} law"), l.r() == &want[..], format!("{:?}", l.r().iter().map(ToString::to_string).collect::<Vec<_>>()));
    }
    for name in ["heisenberg1", "heisenberg2", "engel", "free23"] {
        let d = law(name).associativity_defect();
        c.check(format!("{name} associative"), d.iter().all(Polynomial::is_zero), "nonzero defect");
    }
    let secs = start.elapsed().as_secs_f64();
    c.check("runtime < 5 s", secs < 5.0, format!("{secs:.2} s"));
    c
}

fn c2_vector_fields() -> Checks {
    let mut c = Checks::default();
    for n in 1..=2 {
        let l = law(&format!("heisenberg{n}"));
        let dim = 2 * n + 1;
        let dt = DiffOp::partial(dim, &MultiIndex::unit(dim, 2 * n));
        for j in 0..2 * n {
            let (partner, sign) = if j < n { (j + n, -1) } else { (j - n, 1) };
            let want = DiffOp::partial(dim, &MultiIndex::unit(dim, j)).add(&dt.premul(&x(partner + 1).scale(&rat(sign, 2))));
            c.check(format!("H{n} X{}", j + 1), left_vf(&l, j) == want, "field differs");
        }
        c.check(format!("H{n} X{dim}"), left_vf(&l, 2 * n) == dt, "field differs");
    }
    for name in ["heisenberg1", "heisenberg2", "engel", "free23"] {
        let f = InvariantFields::new(&law(name));
        let mut bad = Vec::new();
        let mut count = 0;
        for a in monomials_up_to_weight(f.weights(), 3) {
            for kind in ConversionKind::ALL {
                count += 1;
                if !verify_conversion(&f, &a, kind, &conversion_polys(&f, &a, kind), 6) {
                    bad.push(format!("{a} {kind:?}"));
                }
            }
        }
        c.check(format!("{name} conversions ({count} tables on weight <= 6)"), bad.is_empty(), bad.join(", "));
    }
    c
}

fn c3_canonical_basis() -> Checks {
    let mut c = Checks::default();
    for name in CATALOG {
        let l = law(name);
        let f = InvariantFields::new(&l);
        let b = CanonicalBasis::build(&f, 6).unwrap();
        c.check(format!("{name} duality to weight 6"), check_duality(&f, &b, 6).unwrap(), "pairing is not the identity");
    }
    for n in 1..=2 {
        let l = law(&format!("heisenberg{n}"));
        let dim = 2 * n + 1;
        let b = basis(&l, 2);
        let mut off = Vec::new();
        let mut diag = Vec::new();
        for j in 0..2 * n {
            let e = MultiIndex::unit(dim, j);
            if b.q(&e).unwrap() != &x(j + 1) {
                off.push(format!("q_{e}"));
            }
            for k in j..2 * n {
                let a = e.add(&MultiIndex::unit(dim, k));
                let got = b.q(&a).unwrap();
                if got != &(&x(j + 1) * &x(k + 1)) {
                    let msg = format!("q_{a} = {got}, listed as x{} x{}", j + 1, k + 1);
                    if j == k { diag.push(msg) } else { off.push(msg) }
                }
            }
        }
        let mut top = x(dim);
        for j in 1..=n {
            top += (&x(j) * &x(n + j)).scale(&rat(-1, 2));
        }
        if b.q(&MultiIndex::unit(dim, 2 * n)).unwrap() != &top {
            off.push("top coordinate".into());
        }
        c.check(format!("H{n} listed q (linear, mixed, central)"), off.is_empty(), off.join("; "));
        c.deviation(format!("H{n} listed q_(2e_j) = x_j x_j"), diag.is_empty(), diag.join("; "));
    }
    for n in 1..=3 {
        let l = law(&format!("abelian{n}"));
        let b = basis(&l, 6);
        let ok = monomials_up_to_weight(l.weights(), 6).iter().all(|a| b.q(a).unwrap() == &Polynomial::monomial(blocks::X, a, rat(1, 1) / a.factorial()));
        c.check(format!("R^{n} q = x^a/a!"), ok, "mismatch");
    }
    c
}

fn c4_symmetry() -> Checks {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 1..=2 {
        let l = law(&format!("heisenberg{n}"));
        let draws = if n == 1 { 20 } else { 5 };
        let (mut sym, mut bent) = (0, 0);
        let mut total_bent = 0;
        for _ in 0..draws {
            let t = QuantizingFunction::heisenberg_family(&l, &random_matrix(&mut rng, 2 * n)).unwrap();
            if t.validate_hp().passed() && t.is_symmetric().symmetric {
                sym += 1;
            }
            for k in 0..=2 * n {
                let mut d = rat(rng.gen_range(-5..=5), rng.gen_range(1..=5));
                if d == rat(0, 1) {
                    d = rat(1, 3);
                }
                let mut coords = t.coords().to_vec();
                coords[k] += x(k + 1).scale(&d);
                total_bent += 1;
                if !QuantizingFunction::new(&l, coords).unwrap().is_symmetric().symmetric {
                    bent += 1;
                }
            }
        }
        c.check(format!("H{n}: {draws} random family members symmetric"), sym == draws, format!("{sym}/{draws}"));
        c.check(format!("H{n}: perturbed leading coefficients fail"), bent == total_bent, format!("{bent}/{total_bent}"));
    }
    for n in 1..=3 {
        let l = law(&format!("heisenberg{n}"));
        let t = mr_tau(&l, &MatrixRep::heisenberg(n)).unwrap();
        let mut want: Vec<Polynomial> = (1..=2 * n + 1).map(|j| x(j).scale(&rat(1, 2))).collect();
        for j in 1..=n {
            want[2 * n] += (&x(j) * &x(n + j)).scale(&rat(1, 24));
        }
        c.check(format!("H{n} matrix-representation tau"), t.coords() == &want[..], t.coords().last().unwrap().to_string());
    }
    c
}

type Row = BTreeMap<Vec<MultiIndex>, Rational>;

fn row(t: &CoefficientTable, a: &MultiIndex) -> Row {
    t.row(a).map(|(s, c)| (s.clone(), c.clone())).collect()
}

fn show(r: &Row) -> String {
    r.iter().map(|(s, c)| format!("[{}]: {c}", s.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))).collect::<Vec<_>>().join(", ")
}

fn c5_composition_coefficients() -> Checks {
    let mut c = Checks::default();
    for n in 1..=2 {
        let l = law(&format!("heisenberg{n}"));
        let dim = 2 * n + 1;
        let tau = half_log(&l);
        let (t1, t2) = composition_coeffs(&tau, &basis(&l, 2), 2).unwrap();
        let z = MultiIndex::zero(dim);
        let e = |j: usize| MultiIndex::unit(dim, j);
        let (mut lin1, mut lin2) = (true, true);
        for j in 0..2 * n {
            lin1 &= row(&t1, &e(j)) == Row::from([(vec![e(j), z.clone()], rat(-1, 2))]);
            lin2 &= row(&t2, &e(j)) == Row::from([(vec![e(j), z.clone()], rat(1, 2))]);
        }
        c.check(format!("H{n} q_e_j(p1) = -1/2 q~_e_j(z)"), lin1, "");
        c.check(format!("H{n} q_e_k(p2) = +1/2 q~_e_k(z^-1 y)"), lin2, "");

        let top = e(2 * n);
        let got1 = row(&t1, &top);
        let got2 = row(&t2, &top);
        let mut central = Row::from([(vec![top.clone(), z.clone()], rat(-1, 2))]);
        let mut pair = Row::new();
        let mut want2 = Row::from([(vec![top.clone(), z.clone()], rat(1, 2))]);
        for j in 0..n {
            let (a, b) = (e(j), e(n + j));
            central.insert(vec![a.add(&b), z.clone()], rat(-3, 8));
            pair.insert(vec![a.clone(), b.clone()], rat(-1, 8));
            pair.insert(vec![b.clone(), a.clone()], rat(1, 8));
            want2.insert(vec![a.clone(), b.clone()], rat(1, 8));
            want2.insert(vec![b.clone(), a.clone()], rat(-1, 8));
            want2.insert(vec![a.add(&b), z.clone()], rat(1, 8));
        }
        let got_central: Row = got1.iter().filter(|(k, _)| k[1].is_zero()).map(|(k, v)| (k.clone(), v.clone())).collect();
        let got_pair: Row = got1.iter().filter(|(k, _)| !k[1].is_zero()).map(|(k, v)| (k.clone(), v.clone())).collect();
        c.check(format!("H{n} q_e_top(p1): -1/2 and -3/8 entries"), got_central == central, show(&got_central));
        c.deviation(format!("H{n} q_e_top(p1): listed 1/8 pair"), got_pair == pair, format!("got {}; listed {}", show(&got_pair), show(&pair)));
        c.check(format!("H{n} q_e_top(p2): 1/2 and 1/8 pattern"), got2 == want2, show(&got2));

        // The listed p_1, p_2 maps, third coordinate.
        let (p1, p2) = tau.p_maps().unwrap();
        let (mut lp1, mut lp2) = (p(&format!("1/2 z{dim}")), p(&format!("1/2 z{dim} - 1/2 y{dim}")));
        for j in 1..=n {
            let k = n + j;
            lp1 += p(&format!("-1/8 z{j} y{k} + 1/8 z{j} z{k} + 1/8 z{k} y{j} - 1/8 z{k} z{j}"));
            lp2 += p(&format!("1/8 y{k} z{j} - 1/8 z{k} z{j} - 1/8 y{j} z{k} + 1/8 z{j} z{k}"));
        }
        c.deviation(format!("H{n} listed p1"), p1[2 * n] == lp1, format!("got {}; listed {lp1}", p1[2 * n]));
        c.check(format!("H{n} listed p2"), p2[2 * n] == lp2, format!("got {}", p2[2 * n]));
    }
    for name in ["heisenberg1", "engel"] {
        let l = law(name);
        let (t1, t2) = composition_coeffs(&QuantizingFunction::builtin(&l, BuiltinTau::Kn), &basis(&l, 4), 4).unwrap();
        let z = MultiIndex::zero(l.dim());
        let only_zero = t1.len() == 1 && t1.get(&z, &[z.clone(), z.clone()]) == rat(1, 1);
        let delta = monomials_up_to_weight(l.weights(), 4).iter().all(|a| row(&t2, a) == Row::from([(vec![a.clone(), z.clone()], rat(1, 1))]));
        c.check(format!("{name} KN tables"), only_zero && delta, "");
    }
    for n in 1..=3 {
        let l = law(&format!("abelian{n}"));
        let (t1, t2) = composition_coeffs(&half_log(&l), &basis(&l, 4), 4).unwrap();
        let z = MultiIndex::zero(n);
        let ok = monomials_up_to_weight(l.weights(), 4).iter().all(|a| {
            let k = a.abs() as i64;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            row(&t1, a) == Row::from([(vec![a.clone(), z.clone()], rat(sign, 1 << k))]) && row(&t2, a) == Row::from([(vec![a.clone(), z.clone()], rat(1, 1 << k))])
        });
        c.check(format!("R^{n} Weyl closed forms to weight 4"), ok, "");
    }
    c
}

fn oracle(text: &str) -> Expansion {
    let mut e = Expansion::default();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split('|').collect();
        let idx = |s: &str| MultiIndex(s.split(',').map(|v| v.parse().unwrap()).collect());
        let term = FormalSymbolTerm::new(
            parse_rational(f[5]).unwrap(),
            0,
            vec![Factor::new(Sym::S1, idx(f[1]), idx(f[2])), Factor::new(Sym::S2, idx(f[3]), idx(f[4]))],
        );
        e.add(f[0].parse().unwrap(), term);
    }
    e
}

fn pair_term(c: Rational, d1: &MultiIndex, x1: &MultiIndex, d2: &MultiIndex, x2: &MultiIndex) -> FormalSymbolTerm {
    FormalSymbolTerm::new(c, 0, vec![Factor::new(Sym::S1, d1.clone(), x1.clone()), Factor::new(Sym::S2, d2.clone(), x2.clone())])
}

/// The listed ω_0, ω_1, ω_2 on `H_n`, read literally; the free index `k` of
/// the `-3/8` sum is read as `n + j`.
fn listed_omegas(n: usize) -> Expansion {
    let dim = 2 * n + 1;
    let z = MultiIndex::zero(dim);
    let e = |j: usize| MultiIndex::unit(dim, j);
    let mut w = Expansion::default();
    w.add(0, pair_term(rat(1, 1), &z, &z, &z, &z));
    for j in 0..2 * n {
        w.add(1, pair_term(rat(1, 2), &z, &e(j), &e(j), &z));
        w.add(1, pair_term(rat(-1, 2), &e(j), &z, &z, &e(j)));
        for k in 0..2 * n {
            let jk = e(j).add(&e(k));
            w.add(2, pair_term(rat(1, 4), &z, &jk, &jk, &z));
            w.add(2, pair_term(rat(-1, 4), &e(j), &e(k), &e(k), &e(j)));
            w.add(2, pair_term(rat(1, 4), &jk, &z, &z, &jk));
        }
    }
    for j in 0..n {
        let (a, b) = (e(j), e(n + j));
        let ab = a.add(&b);
        w.add(2, pair_term(rat(-3, 8), &z, &ab, &ab, &z));
        w.add(2, pair_term(rat(-1, 8), &b, &ab, &a, &z));
        w.add(2, pair_term(rat(1, 8), &a, &ab, &b, &z));
        w.add(2, pair_term(rat(1, 8), &a, &z, &b, &ab));
        w.add(2, pair_term(rat(-1, 8), &b, &z, &a, &ab));
        w.add(2, pair_term(rat(1, 8), &ab, &z, &z, &ab));
    }
    let t = e(2 * n);
    w.add(2, pair_term(rat(1, 2), &z, &t, &t, &z));
    w.add(2, pair_term(rat(-1, 2), &t, &z, &z, &t));
    w
}

fn collapses_to_adjoint(a: &Expansion, dim: usize) -> bool {
    let z = MultiIndex::zero(dim);
    a.term_count() == 1 && a.order_terms(0) == vec![FormalSymbolTerm::new(rat(1, 1), 0, vec![Factor::new(Sym::SStar, z.clone(), z)])]
}

fn c6_expansions() -> Checks {
    let mut c = Checks::default();
    let h1 = law("heisenberg1");
    let b = basis(&h1, 2);
    let got = compose_expansion(&half_log(&h1), &b, 2).unwrap();
    let want = oracle(include_str!("fixtures/oracle/compose-h1-half-log.txt"));
    let same = (0..=2).all(|j| got.order_difference(&want, j).is_empty()) && got.term_count() == want.term_count();
    c.check("H1 half-log against independent oracle", same, got.to_string());
    let mr = mr_tau(&h1, &MatrixRep::heisenberg(1)).unwrap();
    let got_mr = compose_expansion(&mr, &b, 2).unwrap();
    let want_mr = oracle(include_str!("fixtures/oracle/compose-h1-mr.txt"));
    let same = (0..=2).all(|j| got_mr.order_difference(&want_mr, j).is_empty()) && got_mr.term_count() == want_mr.term_count();
    c.check("H1 matrix-representation tau against independent oracle", same, got_mr.to_string());

    let listed = listed_omegas(1);
    for j in 0..=2 {
        let diff = got.order_difference(&listed, j);
        let note = format!("{} differing terms", diff.len());
        if j == 0 {
            c.check("omega_0 as listed", diff.is_empty(), note);
        } else {
            c.deviation(format!("omega_{j} as listed"), diff.is_empty(), note);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut symmetric: Vec<(String, QuantizingFunction)> = Vec::new();
    for name in ["heisenberg1", "heisenberg2", "engel", "free23", "abelian2"] {
        symmetric.push((format!("{name} half-log"), half_log(&law(name))));
    }
    for n in 1..=2 {
        let l = law(&format!("heisenberg{n}"));
        symmetric.push((format!("H{n} matrix-representation"), mr_tau(&l, &MatrixRep::heisenberg(n)).unwrap()));
        for k in 0..3 {
            symmetric.push((format!("H{n} family draw {k}"), QuantizingFunction::heisenberg_family(&l, &random_matrix(&mut rng, 2 * n)).unwrap()));
        }
    }
    let mut bad = Vec::new();
    for (name, t) in &symmetric {
        let bb = basis(t.law(), 3);
        if !collapses_to_adjoint(&adjoint_expansion(t, &bb, 3).unwrap(), t.dim()) {
            bad.push(name.clone());
        }
    }
    c.check(format!("adjoint expansion is s* for {} symmetric functions", symmetric.len()), bad.is_empty(), bad.join(", "));

    let mut cases: Vec<(String, QuantizingFunction)> = ["heisenberg1", "heisenberg2", "engel"].iter().map(|n| (format!("{n} half-log"), half_log(&law(n)))).collect();
    cases.push(("heisenberg1 matrix-representation".into(), mr));
    for (name, t) in cases {
        let r = ggc_core::expansion::poisson_check(&t, &basis(t.law(), 2));
        c.check(format!("poisson check {name}"), r.is_ok(), format!("{r:?}"));
    }
    c
}

fn c7_automorphisms() -> Checks {
    let mut c = Checks::default();
    let h = law("heisenberg1");
    let theta = Automorphism::theta(&h).unwrap();
    let j = Automorphism::symplectic_j(&h).unwrap();
    let dil = Automorphism::dilation(&h, &Polynomial::var_in(blocks::R, 1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let conjs: Vec<Automorphism> = (0..5)
        .map(|_| {
            let y: Vec<Polynomial> = (0..3).map(|_| Polynomial::constant(rat(rng.gen_range(-9..=9), rng.gen_range(1..=9)))).collect();
            Automorphism::conj(&h, &y).unwrap()
        })
        .collect();

    let mut matrices: Vec<Vec<Vec<Rational>>> = (0..20).map(|_| random_matrix(&mut rng, 2)).collect();
    let zero = vec![vec![rat(0, 1); 2]; 2];
    matrices.push(zero.clone());
    matrices.push(vec![vec![rat(0, 1), rat(3, 4)], vec![rat(-3, 4), rat(0, 1)]]);
    matrices.push(vec![vec![rat(0, 1), rat(1, 1)], vec![rat(0, 1), rat(0, 1)]]);
    matrices.push(vec![vec![rat(2, 1), rat(0, 1)], vec![rat(0, 1), rat(2, 1)]]);
    let (mut iff, mut others) = (Vec::new(), 0);
    let mut literal = true;
    for m in &matrices {
        let t = QuantizingFunction::heisenberg_family(&h, m).unwrap();
        let both = theta.commutes_with(&t) && j.commutes_with(&t);
        let sym_zero = m[0][0].clone() == rat(0, 1) && m[1][1].clone() == rat(0, 1) && &m[0][1] + &m[1][0] == rat(0, 1);
        if both != sym_zero {
            iff.push(format!("{m:?}"));
        }
        literal &= both == (*m == zero);
        if conjs.iter().all(|a| a.commutes_with(&t)) && dil.commutes_with(&t) {
            others += 1;
        }
    }
    c.check(
        format!("Theta and J commute iff C + C^T = 0 ({} members)", matrices.len()),
        iff.is_empty(),
        iff.join("; "),
    );
    // An antisymmetric C contributes nothing to the polynomial, so "C = 0" is
    // only decidable at the level of the function itself.
    let antisym = QuantizingFunction::heisenberg_family(&h, &matrices[21]).unwrap();
    c.check("antisymmetric C gives the C = 0 function", antisym == half_log(&h) && !literal, "");
    c.check("all members commute with 5 conjugations and symbolic D_r", others == matrices.len(), format!("{others}/{}", matrices.len()));

    let half = half_log(&h);
    let gens = [
        Automorphism::conj(&h, &Polynomial::coords(blocks::A, 3)).unwrap(),
        dil.clone(),
        theta.clone(),
        j.clone(),
        Automorphism::symplectic_a(&h, &[vec![rat(5, 3)]]).unwrap(),
        Automorphism::symplectic_c(&h, &[vec![rat(-2, 7)]]).unwrap(),
    ];
    let bad: Vec<&str> = gens.iter().filter(|g| !g.respects_kernel_argument(&half)).map(|g| g.name.as_str()).collect();
    c.check("half-log respects the kernel argument for conj, D_r, Theta, S~", bad.is_empty(), bad.join(", "));
    c
}

fn c8_numeric() -> Checks {
    let start = Instant::now();
    let mut c = Checks::default();
    let g = Grid::new(128, 16.0 * PI).unwrap();
    let s = EuclidSymbol::parse("x1 xi1").unwrap();
    let weyl = numeric::adjoint_check(&s, 0.5, &g);
    let kn = numeric::adjoint_check(&s, 0.0, &g);
    c.check("Weyl adjoint <= 1e-10", weyl <= 1e-10, format!("{weyl:e}"));
    c.check("KN adjoint >= 1e-3", kn >= 1e-3, format!("{kn:e}"));
    for (a, b) in [("xi1", "x1"), ("xi1^2", "x1^2"), ("x1^2 xi1", "x1 xi1^2")] {
        let (s1, s2) = (EuclidSymbol::parse(a).unwrap(), EuclidSymbol::parse(b).unwrap());
        let m = numeric::terminating_order(s1.poly().unwrap(), s2.poly().unwrap());
        let at = numeric::moyal_exactness_check(&s1, &s2, &g, m, &rat(1, 2)).unwrap().residual;
        let below = numeric::moyal_exactness_check(&s1, &s2, &g, m - 1, &rat(1, 2)).unwrap().residual;
        c.check(format!("Moyal ({a}, {b}) at M={m} <= 1e-6"), at <= 1e-6, format!("{at:e}"));
        c.check(format!("Moyal ({a}, {b}) at M={} >= 1e-3", m - 1), below >= 1e-3, format!("{below:e}"));
    }
    let reps = numeric::rep_checks(&g, 1.0, &numeric::SAMPLES).unwrap();
    for (name, tol) in [("homomorphism", 1e-8), ("central-character", 1e-10)] {
        let r = reps.iter().find(|r| r.check == name).unwrap();
        c.check(format!("{name} <= {tol:e}"), r.residual <= tol, format!("{:e}", r.residual));
    }
    let sub = numeric::sublaplacian_symbol_check(&g, 1.0).unwrap();
    c.check("sub-Laplacian <= 1e-5", sub.residual <= 1e-5, format!("{:e}", sub.residual));
    for kind in [MetaplecticKind::Dilation(1.2), MetaplecticKind::Chirp(0.5), MetaplecticKind::J] {
        let r = numeric::metaplectic_check(&g, 1.0, kind).unwrap();
        c.check(format!("metaplectic {} <= 1e-6", kind.name()), r.residual <= 1e-6, format!("{:e}", r.residual));
    }
    let secs = start.elapsed().as_secs_f64();
    c.check("runtime < 60 s", secs < 60.0, format!("{secs:.1} s"));
    c
}

fn c9_determinism() -> Checks {
    let mut c = Checks::default();
    let golden = common::check_goldens();
    c.check(format!("{} CLI cases match stored transcripts", common::CASES.len()), golden.is_empty(), golden.join("\n"));
    let differ = common::check_determinism();
    c.check("two consecutive runs byte-identical", differ.is_empty(), differ.join(", "));
    c
}

type Criterion = (&'static str, fn() -> Checks);

fn main() {
    let criteria: [Criterion; 9] = [
        ("group law", c1_group_law),
        ("vector fields", c2_vector_fields),
        ("canonical basis", c3_canonical_basis),
        ("symmetry classification", c4_symmetry),
        ("composition coefficients", c5_composition_coefficients),
        ("expansions", c6_expansions),
        ("automorphism uniqueness", c7_automorphisms),
        ("numeric oracles", c8_numeric),
        ("determinism", c9_determinism),
    ];
    let mut unexpected = 0;
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let checks = run();
        let secs = start.elapsed().as_secs_f64();
        let ok = checks.items.iter().filter(|i| i.ok).count();
        let odd = checks.unexpected();
        let verdict = if checks.passed() { "PASS" } else { "FAIL" };
        let tag = match (checks.passed(), odd.is_empty()) {
            (_, false) => " UNEXPECTED",
            (false, true) => " (documented deviation)",
            _ => "",
        };
        println!("criterion {} {title}: {verdict}{tag} [{ok}/{} checks, {secs:.2} s]", k + 1, checks.items.len());
        for i in checks.items.iter().filter(|i| !i.ok || odd.iter().any(|o| std::ptr::eq(*o, *i))) {
            let label = match (i.ok, i.deviation) {
                (false, true) => "deviation",
                (true, true) => "now passes",
                _ => "fail",
            };
            println!("    {label}: {}{}", i.name, if i.note.is_empty() { String::new() } else { format!(": {}", i.note) });
        }
        failed += usize::from(!checks.passed());
        unexpected += odd.len();
    }
    println!("{} of 9 criteria pass; {unexpected} unexpected outcome(s)", 9 - failed);
    if unexpected > 0 {
        std::process::exit(1);
    }
}
