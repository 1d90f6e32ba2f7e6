//! Acceptance suite: one pass/fail line per criterion.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are still evaluated and printed;
//! they are expected to report FAIL and do not fail the test run.  Every other
//! criterion must pass.

use num_bigint::BigInt;
use std::time::{Duration, Instant};
use wsuper_core::algebra_data::{build_d21a, build_gl, build_osp12n, element, osp12_regular_nilpotent, LieSuperalgebra};
use wsuper_core::modular::{
    build_baby_verma, delta, kw_divisibility, kw_modulus, matrix_size_identity, reduce_frame, reduce_mod_p,
    reduced_w_dim, transition_tensor_check, whittaker_vectors,
};
use wsuper_core::nilpotent_frame::{FrameOptions, NilpotentFrame};
use wsuper_core::scalar::{rat, Scalar};
use wsuper_core::superstructure::{
    arbitrary_char_bound, classify_simple, direct_sum_bound, graded_tensor, q_algebra, tensor_identity_sweep,
    type_table, SimpleType,
};
use wsuper_core::walgebra::reps::{find_rational_point, onedim_system, search_rep_modular, twodim_system};
use wsuper_core::walgebra::{relation_pairs, WAlgebra};
use wsuper_core::Exec;

/// Criteria that cannot pass as literally stated, with the reason.
const KNOWN_UNATTAINABLE: &[(usize, &str)] = &[(
    6,
    "the literal value δ = 10 for osp(1|2) at p = 5 contradicts dim U_χ(g) = δ²·dim U_χ(g,e) = 500; δ = 5",
)];

struct Outcome {
    checks: Vec<(String, bool)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checks: Vec::new() }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }

    fn failed_labels(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect()
    }
}

fn osp() -> LieSuperalgebra {
    build_osp12n(1).unwrap()
}

fn osp_frame(opts: FrameOptions) -> NilpotentFrame {
    let g = osp();
    let e = osp12_regular_nilpotent(&g).unwrap();
    NilpotentFrame::new(&g, &e, opts).unwrap()
}

fn gl21_frame() -> NilpotentFrame {
    let g = build_gl(2, 1).unwrap();
    let e = element(&g, &[("E12", Scalar::one())]).unwrap();
    NilpotentFrame::new(&g, &e, FrameOptions::default()).unwrap()
}

fn c1() -> Outcome {
    let mut o = Outcome::new();
    let d21 = build_d21a(&rat(2, 1)).unwrap();
    for (name, g) in [("gl(2|1)", build_gl(2, 1).unwrap()), ("osp(1|2)", osp()), ("D(2,1;2)", d21.clone())] {
        o.check(format!("{name} super-Jacobi"), g.validate(Exec::default()).all());
        o.check(format!("{name} invariant form"), g.verify_form(Exec::default()).map(|r| r.all()).unwrap_or(false));
    }
    let f = |x: &str, y: &str| d21.form(&d21.named(x).unwrap(), &d21.named(y).unwrap()).unwrap();
    o.check("(e1,f1) = 1", f("e1", "f1") == Scalar::one());
    o.check("(e2,f2) = -1", f("e2", "f2") == Scalar::int(-1));
    o
}

fn c2() -> Outcome {
    let mut o = Outcome::new();
    for (name, frame) in [("osp(1|2)", osp_frame(FrameOptions::default())), ("gl(2|1)", gl21_frame())] {
        let r = frame.verify();
        o.check(format!("{name} m^⊥ decomposition"), r.m_perp);
        o.check(format!("{name} p decomposition"), r.p_decomposition);
        o.check(format!("{name} centralizer dimension identity"), r.centralizer_dims);
        o.check(format!("{name} all frame checks"), r.all());
    }
    o
}

fn c3() -> Outcome {
    let mut o = Outcome::new();
    let w = WAlgebra::compute(&osp_frame(FrameOptions::default()), 10, Exec::default()).unwrap();
    let r = w.pbw_check();
    o.check("osp(1|2) D=10 graded dims", r.rows.iter().all(|x| x.invariant_dim == x.predicted));
    o.check("osp(1|2) D=10 Θ-monomials independent", r.theta_independent && r.theta_in_invariants);
    let w = WAlgebra::compute(&gl21_frame(), 8, Exec::default()).unwrap();
    let r = w.pbw_check();
    o.check("gl(2|1) D=8 graded dims", r.rows.iter().all(|x| x.invariant_dim == x.predicted));
    o.check("gl(2|1) D=8 Θ-monomials independent", r.theta_independent && r.theta_in_invariants);
    o
}

fn c4() -> Outcome {
    let mut o = Outcome::new();
    for (label, opts) in [("over ℚ", FrameOptions::default()), ("normalized over ℚ(√2)", FrameOptions { allow_extension: true })] {
        let frame = osp_frame(opts);
        let c = frame.c.clone();
        let w = WAlgebra::compute(&frame, 8, Exec::default()).unwrap();
        let t = w.commutator_table().unwrap();
        let r = t.check();
        o.check(format!("{label}: every pair tabulated"), r.pairs == relation_pairs(&w).len());
        o.check(format!("{label}: leading parts Σα Θ"), r.leading);
        o.check(format!("{label}: degree and parity bounds"), r.degree_bound && r.sigma_parity);
        o.check(format!("{label}: [Θ3,Θ3] = c (c = {})", c.to_canonical_string()), r.odd_square);
        if opts.allow_extension {
            o.check("normalized constant c = 1", c.is_one());
        }
    }
    o
}

fn c5() -> Outcome {
    let mut o = Outcome::new();
    let w = WAlgebra::compute(&osp_frame(FrameOptions::default()), 8, Exec::default()).unwrap();
    let t = w.commutator_table().unwrap();
    let two = twodim_system(&t);
    let (search, lifted) = find_rational_point(&two, 5, Exec::default()).unwrap();
    o.check(format!("two-dim solutions mod 5 ({} found)", search.count), search.count > 0);
    o.check("lifted rational point verified exactly", lifted.map(|pt| two.verify(&pt).unwrap_or(false)).unwrap_or(false));
    let one = onedim_system(&t);
    o.check("one-dim system carries the constant obstruction", one.obstruction.is_some());
    let s = search_rep_modular(&one, 5, 1, Exec::default()).unwrap();
    o.check("one-dim system has no point mod 5", s.count == 0);
    o
}

fn c6() -> Outcome {
    let mut o = Outcome::new();
    let frame = osp_frame(FrameOptions::default());
    let p = 5;
    let d = delta(&frame, p).unwrap();
    o.check(format!("δ = 10 (computed δ = {d})"), d == BigInt::from(10));
    let m = reduce_mod_p(&frame.alg, p).unwrap();
    let fp = reduce_frame(&frame, p).unwrap();
    let z = build_baby_verma(&m, &fp, 1).unwrap();
    o.check("baby Verma dimension 10", z.dim() == 10);
    o.check("baby Verma is a module with p-character χ", z.respects_brackets(&m.base) && z.respects_p_character(&m).unwrap());
    o.check("baby Verma irreducible (exhaustive)", z.is_irreducible(100_000).map(|r| r.0).unwrap_or(false));
    o.check("dim Z^m = 2", whittaker_vectors(&z, &fp).len() == 2);
    o.check(
        format!("KW divisibility of 10 by {}", kw_modulus(&frame, p)),
        kw_divisibility(&BigInt::from(z.dim()), &frame, p),
    );
    let (lhs, rhs, ok) = matrix_size_identity(&frame, p).unwrap();
    o.check(format!("{lhs} = δ²·{} = {rhs}", reduced_w_dim(&frame, p)), ok);
    o
}

fn c7() -> Outcome {
    let mut o = Outcome::new();
    let w = WAlgebra::compute(&osp_frame(FrameOptions::default()), 8, Exec::default()).unwrap();
    let r = transition_tensor_check(&w, 3, Exec::default()).unwrap();
    o.check("reduced generators are invariant", r.generators_invariant);
    o.check("families independent per degree", r.family_a_independent && r.family_b_independent);
    o.check("family counts equal invariant dimensions", r.rows.iter().all(|x| x.family_a == x.invariant_dim && x.family_b == x.invariant_dim));
    o.check("top-term law", r.top_term_law);
    o
}

fn c8() -> Outcome {
    let mut o = Outcome::new();
    let rows = tensor_identity_sweep(3, Exec::default()).unwrap();
    let bad = rows.iter().filter(|r| r.found != Some(r.predicted)).count();
    o.check(format!("tensor identities ({} pairs, {bad} mismatches)", rows.len()), bad == 0);
    let table = type_table(4, Exec::default()).unwrap();
    let bad = table.iter().filter(|r| !r.ok()).count();
    o.check(format!("outer tensor type table ({} pairs, {bad} mismatches)", table.len()), bad == 0);
    let q = q_algebra(1).unwrap();
    let q3 = graded_tensor(&graded_tensor(&q, &q), &q);
    o.check("Q(1)^⊗3 ≅ Q(2)", classify_simple(&q3).ok() == Some(SimpleType::Q { n: 2 }));
    o
}

fn c9() -> Outcome {
    let mut o = Outcome::new();
    let g = build_gl(2, 1).unwrap();
    let x = element(&g, &[("E11", Scalar::one()), ("E22", Scalar::one()), ("E12", Scalar::one())]).unwrap();
    let p = 7;
    let b = arbitrary_char_bound(&g, &x, p).unwrap();
    o.check(format!("Levi and direct counters agree ({:?})", b.levi.direct), b.paths_agree);
    o.check("at most one odd summand", b.at_most_one_odd);
    let expect = BigInt::from(p).pow((b.d0 / 2) as u32) * BigInt::from(2).pow(b.d1.div_ceil(2) as u32);
    o.check(format!("bound {} = p^(d0/2)·2^⌈d1/2⌉", b.bound), b.bound == expect);
    o.check("composition identity", b.composition_identity);
    let ds = direct_sum_bound(&b.levi.summand_d, p).unwrap();
    o.check("direct-sum bound exponent (d′₁+l)/2 integral", (ds.d1 + ds.l) % 2 == 0);
    let two_odd = direct_sum_bound(&[(2, 1), (2, 1)], p).unwrap();
    o.check("two odd summands double the floor bound", two_odd.bound == &two_odd.floor_bound * 2);
    o
}

fn c10() -> Outcome {
    let mut o = Outcome::new();
    for g in [build_gl(1, 1).unwrap(), osp()] {
        let frame = NilpotentFrame::new(&g, &g.zero(), FrameOptions::default()).unwrap();
        let w = WAlgebra::compute(&frame, 4, Exec::default()).unwrap();
        o.check(format!("{}: generators = basis", g.kind), w.ngens() == g.dim());
        o.check(
            format!("{}: Θ_k are the letters", g.kind),
            w.gens.iter().all(|x| x.theta == w.model.mono_elem(&w.model.letter_mono(x.letter))),
        );
        o.check(format!("{}: PBW", g.kind), w.pbw_check().all());
        o.check(format!("{}: δ = 1", g.kind), delta(&frame, 5).unwrap() == BigInt::from(1));
        o.check(format!("{}: KW modulus 1", g.kind), kw_modulus(&frame, 5) == BigInt::from(1));
        let b = arbitrary_char_bound(&g, &g.zero(), 5);
        o.check(format!("{}: zero-character bound 1", g.kind), b.map(|b| b.bound == BigInt::from(1)).unwrap_or(false));
    }
    o
}

fn main() -> std::process::ExitCode {
    let criteria: Vec<(usize, &str, fn() -> Outcome, Duration)> = vec![
        (1, "structure validation", c1, Duration::from_secs(5)),
        (2, "frame decompositions", c2, Duration::from_secs(5)),
        (3, "PBW dimensions", c3, Duration::from_secs(120)),
        (4, "relation table", c4, Duration::from_secs(60)),
        (5, "representation systems", c5, Duration::from_secs(60)),
        (6, "modular pipeline", c6, Duration::from_secs(60)),
        (7, "transition tensor check", c7, Duration::from_secs(120)),
        (8, "superalgebra calculus", c8, Duration::from_secs(10)),
        (9, "bound calculators", c9, Duration::from_secs(10)),
        (10, "degenerate nilpotent", c10, Duration::from_secs(5)),
    ];
    let mut unexpected = Vec::new();
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = out.passed() && in_time;
        let known = KNOWN_UNATTAINABLE.iter().find(|k| k.0 == id);
        let mut detail = out.failed_labels().join("; ");
        if !in_time {
            detail = format!("{detail} exceeded {limit:?}");
        }
        println!(
            "criterion {id:>2} {:<4} {name} ({:.2}s){}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            if pass { String::new() } else { format!(" — {detail}") }
        );
        match known {
            Some((_, why)) => {
                println!("             known unattainable: {why}");
                // Only the unattainable sub-check may fail.
                let others: Vec<_> = out.checks.iter().filter(|c| !c.1 && !c.0.starts_with("δ = 10")).collect();
                if !others.is_empty() || !in_time {
                    unexpected.push(id);
                }
            }
            None if !pass => unexpected.push(id),
            None => {}
        }
    }
    if unexpected.is_empty() {
        std::process::ExitCode::SUCCESS
    } else {
        eprintln!("criteria failed unexpectedly: {unexpected:?}");
        std::process::ExitCode::FAILURE
    }
}
