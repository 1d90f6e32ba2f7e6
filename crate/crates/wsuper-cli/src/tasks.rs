//! Task runners. Each task yields a JSON object with a `status` field:
//! `ok`, `fail` (a check did not hold) or `error` (the computation aborted).

use crate::job::{build_algebra, build_nilpotent, element_from_map, JobSpec, SpecError, Task};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use std::cell::OnceCell;
use std::time::Instant;
use wsuper_core::algebra_data::{LieSuperalgebra, Parity};
use wsuper_core::linalg::Vector;
use wsuper_core::modular::{
    admissibility, build_baby_verma, delta, kw_divisibility, kw_modulus, matrix_size_identity, reduce_frame,
    reduce_mod_p, reduced_w_dim, transition_tensor_check, whittaker_vectors,
};
use wsuper_core::nilpotent_frame::{FrameOptions, NilpotentFrame};
use wsuper_core::superstructure::arbitrary_char_bound;
use wsuper_core::walgebra::reps::{find_rational_point, onedim_system, search_rep_modular, twodim_system, RepSystem};
use wsuper_core::walgebra::{RelationTable, WAlgebra};
use wsuper_core::{Error, Exec, Scalar};

/// Prime used by `repsearch` when the job lists none.
pub const DEFAULT_SEARCH_PRIME: u64 = 5;

/// Failure of a single task.
#[derive(Debug)]
pub enum TaskError {
    /// The core library aborted.
    Core(Error),
    /// A prerequisite computation failed.
    Upstream(String),
}

impl From<Error> for TaskError {
    fn from(e: Error) -> Self {
        TaskError::Core(e)
    }
}

impl TaskError {
    fn to_json(&self) -> Value {
        match self {
            TaskError::Core(Error::DegreeCap { needed, given }) => json!({
                "status": "error",
                "error": format!("degree cap {given} too small"),
                "needed_degree_cap": needed,
            }),
            TaskError::Core(e) => json!({"status": "error", "error": e.to_string()}),
            TaskError::Upstream(s) => json!({"status": "error", "error": s}),
        }
    }
}

type TaskResult = Result<Value, TaskError>;

fn s(x: &Scalar) -> Value {
    Value::String(x.to_canonical_string())
}

/// Integers that fit in `u64` become JSON numbers, larger ones decimal strings.
pub fn big(x: &BigInt) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => Value::String(x.to_string()),
    }
}

fn parity(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "fail"
    }
}

fn with_status(mut v: Value, ok: bool) -> Value {
    v["status"] = json!(status(ok));
    v
}

/// Shared state of a job run; expensive objects are built on first use.
pub struct Context<'a> {
    job: &'a JobSpec,
    exec: Exec,
    alg: LieSuperalgebra,
    e: Vector,
    frame: OnceCell<Result<NilpotentFrame, Error>>,
    w: OnceCell<Result<WAlgebra, Error>>,
    table: OnceCell<Result<RelationTable, Error>>,
}

impl<'a> Context<'a> {
    /// Builds the algebra and nilpotent of a job.
    pub fn new(job: &'a JobSpec, exec: Exec) -> Result<Context<'a>, SpecError> {
        let alg = build_algebra(&job.algebra)?;
        let e = build_nilpotent(&alg, &job.nilpotent)?;
        Ok(Context { job, exec, alg, e, frame: OnceCell::new(), w: OnceCell::new(), table: OnceCell::new() })
    }

    fn frame(&self) -> Result<&NilpotentFrame, TaskError> {
        self.frame
            .get_or_init(|| {
                let opts = FrameOptions { allow_extension: self.job.allow_extension };
                NilpotentFrame::new(&self.alg, &self.e, opts)
            })
            .as_ref()
            .map_err(|e| TaskError::Upstream(format!("frame construction failed: {e}")))
    }

    fn walgebra(&self) -> Result<&WAlgebra, TaskError> {
        let frame = self.frame()?;
        self.w
            .get_or_init(|| {
                eprintln!("computing invariants through Kazhdan degree {}", self.job.degree_cap);
                WAlgebra::compute(frame, self.job.degree_cap, self.exec)
            })
            .as_ref()
            .map_err(|e| match e {
                Error::DegreeCap { .. } => TaskError::Core(e.clone()),
                e => TaskError::Upstream(format!("W-algebra computation failed: {e}")),
            })
    }

    fn table(&self) -> Result<&RelationTable, TaskError> {
        let w = self.walgebra()?;
        self.table.get_or_init(|| w.commutator_table()).as_ref().map_err(|e| match e {
            Error::DegreeCap { .. } => TaskError::Core(e.clone()),
            e => TaskError::Upstream(format!("commutator table failed: {e}")),
        })
    }

    /// Runs one task; errors are folded into the returned object.
    pub fn run(&self, task: Task) -> Value {
        eprintln!("task {}", task.name());
        let start = Instant::now();
        let out = match task {
            Task::Describe => self.describe(),
            Task::Wgens => self.wgens(),
            Task::Relations => self.relations(),
            Task::Repsearch => self.repsearch(),
            Task::Modular => self.modular(),
            Task::Bounds => self.bounds(),
            Task::Tensorcheck => self.tensorcheck(),
        };
        let mut v = out.unwrap_or_else(|e| e.to_json());
        if self.job.timing {
            v["seconds"] = json!(start.elapsed().as_secs_f64());
        }
        v
    }

    fn describe(&self) -> TaskResult {
        let g = &self.alg;
        let mut out = json!({
            "algebra": g.kind.to_string(),
            "dims": [g.dims().0, g.dims().1],
            "basis": g.basis().iter().map(|b| json!({"name": b.name, "parity": parity(b.parity)})).collect::<Vec<_>>(),
            "nilpotent": self.named_element(&self.e),
        });
        let frame = self.frame()?;
        let c = &frame.counters;
        let rep = frame.verify();
        out["counters"] = json!({
            "s": c.s, "r": c.r, "t": c.t, "t_prime": c.t_prime, "l": c.l, "q": c.q, "m": c.m, "n": c.n,
            "r_parity": if c.r_odd() { "odd" } else { "even" },
        });
        out["c"] = s(&frame.c);
        out["grading"] = frame
            .grading
            .pieces
            .iter()
            .map(|pc| json!({"degree": pc.degree, "even": pc.even.len(), "odd": pc.odd.len()}))
            .collect();
        out["frame_checks"] = json!({
            "triple": rep.triple, "grading_partition": rep.grading_partition, "grading_brackets": rep.grading_brackets,
            "grading_form": rep.grading_form, "chi_odd_zero": rep.chi_odd_zero, "u_pairing": rep.u_pairing,
            "v_pairing": rep.v_pairing, "m_character": rep.m_character, "m_perp": rep.m_perp,
            "p_decomposition": rep.p_decomposition, "centralizer_dims": rep.centralizer_dims,
            "e_surjective": rep.e_surjective, "ge_nonnegative": rep.ge_nonnegative,
            "alphabet_complement": rep.alphabet_complement,
        });
        let max_kdeg = frame.letters.iter().map(|l| l.kdeg()).max();
        let mut primes = Map::new();
        for &p in &self.job.primes {
            let adm = admissibility(g, p, max_kdeg);
            let (lhs, rhs, ok) = matrix_size_identity(frame, p)?;
            primes.insert(
                p.to_string(),
                json!({
                    "delta": big(&delta(frame, p)?),
                    "kw_modulus": big(&kw_modulus(frame, p)),
                    "reduced_w_dim": big(&reduced_w_dim(frame, p)),
                    "matrix_size_identity": {"lhs": big(&lhs), "rhs": big(&rhs), "holds": ok},
                    "admissible": adm.ok(),
                    "admissibility_failure": adm.failure(),
                }),
            );
        }
        out["primes"] = Value::Object(primes);
        Ok(with_status(out, rep.all()))
    }

    fn named_element(&self, x: &[Scalar]) -> Value {
        let mut m = Map::new();
        for (b, c) in self.alg.basis().iter().zip(x) {
            if !c.is_zero() {
                m.insert(b.name.clone(), s(c));
            }
        }
        Value::Object(m)
    }

    fn wgens(&self) -> TaskResult {
        let w = self.walgebra()?;
        let pbw = w.pbw_check();
        for r in &pbw.rows {
            eprintln!(
                "  degree {:>3}: invariants {:>5}  predicted {:>5}  Θ-monomials {:>5}",
                r.degree, r.invariant_dim, r.predicted, r.theta_monomials
            );
        }
        let gens: Vec<Value> = w
            .gens
            .iter()
            .map(|g| {
                json!({
                    "name": g.name, "symbol": g.symbol, "weight": g.weight, "kazhdan_degree": g.kdeg(),
                    "parity": parity(g.parity), "theta": w.model.format(&g.theta),
                })
            })
            .collect();
        let gr = w.generator_report()?;
        let rows: Vec<Value> = pbw
            .rows
            .iter()
            .map(|r| json!({"degree": r.degree, "invariant_dim": r.invariant_dim, "predicted": r.predicted, "theta_monomials": r.theta_monomials}))
            .collect();
        let ok = pbw.all() && gr.all();
        Ok(with_status(
            json!({
                "degree_cap": w.cap(),
                "generators": gens,
                "pbw": {"rows": rows, "theta_independent": pbw.theta_independent, "theta_in_invariants": pbw.theta_in_invariants},
                "generator_checks": {"invariant": gr.invariant, "leading": gr.leading, "sigma": gr.sigma},
            }),
            ok,
        ))
    }

    fn relations(&self) -> TaskResult {
        let t = self.table()?;
        let rows: Vec<Value> = t
            .entries
            .iter()
            .map(|r| json!({"left": t.names[r.i], "right": t.names[r.j], "value": t.format_poly(&r.f)}))
            .collect();
        let rep = t.check();
        Ok(with_status(
            json!({
                "degree_cap": t.cap,
                "generators": t.names,
                "c": s(&t.c),
                "relations": rows,
                "checks": {"pairs": rep.pairs, "leading": rep.leading, "degree_bound": rep.degree_bound,
                           "sigma_parity": rep.sigma_parity, "odd_square": rep.odd_square},
            }),
            rep.all(),
        ))
    }

    fn repsearch(&self) -> TaskResult {
        let t = self.table()?;
        let primes = if self.job.primes.is_empty() { vec![DEFAULT_SEARCH_PRIME] } else { self.job.primes.clone() };
        let sys_json = |sys: &RepSystem, lift: bool| -> TaskResult {
            let mut per = Map::new();
            let mut point = None;
            for &p in &primes {
                let search = if lift && point.is_none() {
                    let (search, lifted) = find_rational_point(sys, p, self.exec)?;
                    point = lifted;
                    search
                } else {
                    search_rep_modular(sys, p, 1, self.exec)?
                };
                per.insert(p.to_string(), json!({"visited": search.visited, "solutions": search.count}));
            }
            let mut v = json!({
                "variables": sys.vars,
                "equations": sys.equations.iter().map(|e| json!({"label": e.label, "poly": e.poly.format(&sys.vars)})).collect::<Vec<_>>(),
                "vacuous": sys.vacuous,
                "obstruction": sys.obstruction,
                "search": per,
            });
            if lift {
                v["rational_point"] = match &point {
                    Some(pt) => json!(sys.vars.iter().zip(pt).map(|(n, c)| (n.clone(), s(c))).collect::<Map<_, _>>()),
                    None => Value::Null,
                };
                if let Some(pt) = &point {
                    v["rational_point_verified"] = json!(sys.verify(pt)?);
                }
            }
            Ok(v)
        };
        let one = sys_json(&onedim_system(t), false)?;
        let two = sys_json(&twodim_system(t), true)?;
        let ok = two.get("rational_point_verified").is_none_or(|v| v == &json!(true));
        Ok(with_status(json!({"onedim": one, "twodim": two}), ok))
    }

    fn modular(&self) -> TaskResult {
        let frame = self.frame()?;
        let max_kdeg = frame.letters.iter().map(|l| l.kdeg()).max();
        let mut per = Map::new();
        let mut ok = true;
        for &p in &self.job.primes {
            let adm = admissibility(&self.alg, p, max_kdeg);
            if !adm.ok() {
                per.insert(p.to_string(), json!({"admissible": false, "reason": adm.failure()}));
                continue;
            }
            let entry = self.modular_at(frame, p).unwrap_or_else(|e| e.to_json());
            ok &= entry["status"] == "ok";
            per.insert(p.to_string(), entry);
        }
        Ok(with_status(json!({"primes": per}), ok))
    }

    fn modular_at(&self, frame: &NilpotentFrame, p: u64) -> TaskResult {
        let m = reduce_mod_p(&self.alg, p)?;
        let rest = m.restrictedness(&[2])?;
        let (mod_center, exact) = m.pmap_paths_agree()?;
        let (lhs, rhs, identity) = matrix_size_identity(frame, p)?;
        let mut out = json!({
            "admissible": true,
            "restricted": {"homogeneity": rest.homogeneity, "ad_law": rest.ad_law, "jacobson": rest.jacobson},
            "pmap_paths": {"agree_mod_center": mod_center, "agree_exactly": exact},
            "matrix_size_identity": {"lhs": big(&lhs), "rhs": big(&rhs), "holds": identity},
        });
        let mut ok = rest.all() && mod_center && identity;
        let fp = reduce_frame(frame, p)?;
        match build_baby_verma(&m, &fp, 0) {
            Ok(z) => {
                let irreducible = match z.is_irreducible(self.job.irreducibility_limit) {
                    Ok((b, tested)) => json!({"irreducible": b, "vectors_tested": tested}),
                    Err(Error::SearchTooLarge(msg)) => json!({"irreducible": null, "skipped": msg}),
                    Err(e) => return Err(e.into()),
                };
                let brackets = z.respects_brackets(&m.base);
                let character = z.respects_p_character(&m)?;
                let kw = kw_divisibility(&BigInt::from(z.dim()), frame, p);
                ok &= brackets && character && kw && irreducible["irreducible"] != json!(false);
                out["baby_verma"] = json!({
                    "lambda": 0,
                    "dims": [z.dims().0, z.dims().1],
                    "respects_brackets": brackets,
                    "respects_p_character": character,
                    "whittaker_vectors": whittaker_vectors(&z, &fp).len(),
                    "kw_divisible": kw,
                    "irreducibility": irreducible,
                    "basis": z.basis_names,
                    "matrices": self.alg.basis().iter().map(|b| b.name.clone()).zip(z.export_matrices())
                        .map(|(n, mat)| json!({"element": n, "matrix": mat})).collect::<Vec<_>>(),
                });
            }
            Err(Error::Unsupported(msg)) => out["baby_verma"] = json!({"skipped": msg}),
            Err(e) => return Err(e.into()),
        }
        Ok(with_status(out, ok))
    }

    fn bounds(&self) -> TaskResult {
        let x = match &self.job.character {
            Some(m) => element_from_map(&self.alg, m).map_err(|e| TaskError::Upstream(e.to_string()))?,
            None => self.e.clone(),
        };
        let mut per = Map::new();
        let mut ok = true;
        for &p in &self.job.primes {
            let b = arbitrary_char_bound(&self.alg, &x, p)?;
            let good = b.paths_agree && b.at_most_one_odd && b.composition_identity;
            ok &= good;
            per.insert(
                p.to_string(),
                json!({
                    "d0": b.d0, "d1": b.d1, "l": b.l, "p": p,
                    "p_exponent": b.d0 / 2, "two_exponent": b.d1.div_ceil(2),
                    "bound": big(&b.bound),
                    "levi_summands": b.levi.summand_d.iter().map(|d| json!([d.0, d.1])).collect::<Vec<_>>(),
                    "paths_agree": b.paths_agree, "at_most_one_odd": b.at_most_one_odd,
                    "composition_identity": b.composition_identity,
                }),
            );
        }
        Ok(with_status(json!({"character": self.named_element(&x), "primes": per}), ok))
    }

    fn tensorcheck(&self) -> TaskResult {
        let w = self.walgebra()?;
        let mut per = Map::new();
        let mut ok = true;
        for &p in &self.job.primes {
            let entry = match transition_tensor_check(w, p, self.exec) {
                Ok(r) => {
                    ok &= r.all();
                    with_status(
                        json!({
                            "verified_to_degree": r.cap,
                            "rows": r.rows.iter().map(|row| json!({"degree": row.degree, "invariant_dim": row.invariant_dim,
                                "family_a": row.family_a, "family_b": row.family_b})).collect::<Vec<_>>(),
                            "generators_invariant": r.generators_invariant,
                            "family_a_independent": r.family_a_independent,
                            "family_b_independent": r.family_b_independent,
                            "families_invariant": r.families_invariant,
                            "top_term_law": r.top_term_law,
                            "p_center_generators": r.witnessed,
                        }),
                        r.all(),
                    )
                }
                Err(e) => {
                    ok = false;
                    TaskError::from(e).to_json()
                }
            };
            per.insert(p.to_string(), entry);
        }
        Ok(with_status(json!({"primes": per}), ok))
    }
}

/// Runs every task of a job and assembles the report.
pub fn run_job(job: &JobSpec, exec: Exec) -> Result<Value, SpecError> {
    let ctx = Context::new(job, exec)?;
    let mut tasks = Map::new();
    for &t in &job.tasks {
        tasks.insert(t.name().to_string(), ctx.run(t));
    }
    let ok = tasks.values().all(|v| v["status"] == "ok");
    Ok(json!({
        "tool": "wsuper",
        "version": env!("CARGO_PKG_VERSION"),
        "job": {
            "algebra": job.algebra,
            "nilpotent": job.nilpotent,
            "degree_cap": job.degree_cap,
            "primes": job.primes,
        },
        "status": status(ok),
        "tasks": tasks,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(text: &str) -> JobSpec {
        JobSpec::parse(text).unwrap()
    }

    #[test]
    fn big_integers_switch_to_strings() {
        assert_eq!(big(&BigInt::from(7)), json!(7));
        let huge = BigInt::from(u64::MAX) * 3;
        assert_eq!(big(&huge), json!(huge.to_string()));
    }

    #[test]
    fn osp_describe_reports_counters_and_primes() {
        let j = job(r#"{"algebra": {"type": "osp", "n": 1}, "nilpotent": "regular", "primes": [5], "tasks": ["describe"]}"#);
        let r = run_job(&j, Exec::Sequential).unwrap();
        let d = &r["tasks"]["describe"];
        assert_eq!(d["status"], "ok");
        assert_eq!(d["primes"]["5"]["delta"], json!(5));
        assert_eq!(d["primes"]["5"]["reduced_w_dim"], json!(20));
        assert_eq!(d["primes"]["5"]["matrix_size_identity"]["lhs"], json!(500));
        assert_eq!(d["primes"]["5"]["matrix_size_identity"]["holds"], json!(true));
    }

    #[test]
    fn a_too_small_cap_reports_the_needed_degree() {
        let j = job(r#"{"algebra": {"type": "osp", "n": 1}, "nilpotent": "regular", "degree_cap": 2, "tasks": ["relations", "describe"]}"#);
        let r = run_job(&j, Exec::Sequential).unwrap();
        assert_eq!(r["tasks"]["relations"]["status"], "error");
        assert!(r["tasks"]["relations"]["needed_degree_cap"].as_i64().unwrap() > 2);
        assert_eq!(r["tasks"]["describe"]["status"], "ok");
        assert_eq!(r["status"], "fail");
    }

    #[test]
    fn inadmissible_primes_are_reported_not_fatal() {
        let j = job(r#"{"algebra": {"type": "D21a", "a": "2"}, "primes": [3, 5], "tasks": ["modular"]}"#);
        let r = run_job(&j, Exec::Sequential).unwrap();
        let m = &r["tasks"]["modular"]["primes"];
        assert_eq!(m["3"]["admissible"], json!(false));
        assert_eq!(m["5"]["restricted"]["jacobson"], json!(true));
    }
}
