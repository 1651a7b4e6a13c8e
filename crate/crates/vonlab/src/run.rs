//! Command dispatch and report assembly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use vonlab_core::algebra::{center, commutant, generate};
use vonlab_core::dynamics::{
    action_analysis, cartan_factor_trace, crossed_product, crossed_product_nonsingular, fm_algebra,
    fm_membership_residual, gms_fm_bridge, left_operator_matrix, rel_measures,
    right_commutant_check,
};
use vonlab_core::groupvna::{center_profile, group_algebra, FiniteGroup};
use vonlab_core::reps::{intertwiners, is_disjoint, mackey_decompose, reassemble, rep_diagnostics};
use vonlab_core::structure::{block_decompose, trace_with, Comparison};
use vonlab_core::tensor::{itpfi_truncate, kron_algebra, odometer_bridge, powers_list};
use vonlab_core::{Mat, OperatorAlgebra, Tol};

use crate::cli::{
    ActionCmd, AlgebraCmd, Command, GlobalOpts, GroupCmd, GroupInput, RelationCmd, RepCmd, TensorCmd,
};
use crate::docs::{
    read_doc, ActionDoc, AlgebraDoc, EigenvalueListDoc, GroupDoc, MatrixDoc, RelationDoc, RepDoc,
};
use crate::error::CliError;

#[derive(Debug, Serialize)]
pub struct CommandEcho {
    pub verb: &'static str,
    pub subverb: &'static str,
    pub inputs: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Diagnostics {
    pub tol: TolEcho,
    pub witness: bool,
    pub seed: Option<u64>,
    pub jobs: usize,
    /// Every residual behind a reported assertion, by name.
    pub residuals: BTreeMap<String, f64>,
    pub max_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct TolEcho {
    pub rank_rel: f64,
    pub subspace_abs: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: CommandEcho,
    pub results: Value,
    pub diagnostics: Diagnostics,
    pub version: &'static str,
}

pub fn tolerance(opts: &GlobalOpts) -> Result<Tol, CliError> {
    let d = Tol::default();
    if opts.jobs == 0 {
        return Err(CliError::validation("--jobs must be at least 1"));
    }
    Ok(Tol::new(
        opts.rank_tol.unwrap_or(d.rank_rel()),
        opts.tol.unwrap_or(d.subspace_abs()),
    )?)
}

/// Collects residuals while a command runs.
struct Ctx {
    tol: Tol,
    witness: bool,
    residuals: BTreeMap<String, f64>,
}

impl Ctx {
    fn residual(&mut self, name: &str, r: f64) -> f64 {
        let e = self.residuals.entry(name.to_string()).or_insert(0.0);
        *e = e.max(r);
        r
    }

    fn matrix(&self, m: &Mat) -> Value {
        if self.witness {
            json!(MatrixDoc::from(m))
        } else {
            Value::Null
        }
    }

    fn matrices(&self, ms: &[Mat]) -> Value {
        if self.witness {
            json!(ms.iter().map(MatrixDoc::from).collect::<Vec<_>>())
        } else {
            Value::Null
        }
    }
}

pub fn run_command(cmd: &Command, opts: &GlobalOpts) -> Result<Report, CliError> {
    let tol = tolerance(opts)?;
    let mut ctx = Ctx {
        tol,
        witness: opts.witness,
        residuals: BTreeMap::new(),
    };
    let mut results = dispatch(cmd, &mut ctx)?;
    strip_nulls(&mut results);
    let (verb, subverb, inputs) = cmd.describe();
    let max_residual = ctx.residuals.values().copied().fold(0.0, f64::max);
    Ok(Report {
        command: CommandEcho {
            verb,
            subverb,
            inputs,
        },
        results,
        diagnostics: Diagnostics {
            tol: TolEcho {
                rank_rel: tol.rank_rel(),
                subspace_abs: tol.subspace_abs(),
            },
            witness: opts.witness,
            seed: opts.seed,
            jobs: opts.jobs,
            residuals: ctx.residuals,
            max_residual,
        },
        version: env!("CARGO_PKG_VERSION"),
    })
}

/// Drops `null` fields left by matrices withheld without `--witness`.
fn strip_nulls(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|_, x| !x.is_null());
            map.values_mut().for_each(strip_nulls);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_nulls),
        _ => {}
    }
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<Value, CliError> {
    match cmd {
        Command::Algebra(c) => algebra(c, ctx),
        Command::Group(c) => group(c, ctx),
        Command::Action(c) => action(c, ctx),
        Command::Relation(c) => relation(c, ctx),
        Command::Tensor(c) => tensor(c, ctx),
        Command::Rep(c) => rep(c, ctx),
    }
}

fn load_algebra(path: &Path, ctx: &Ctx) -> Result<(AlgebraDoc, OperatorAlgebra), CliError> {
    let doc: AlgebraDoc = read_doc(path)?;
    let gens = doc.generators()?;
    let m = generate(doc.ambient_dim, &gens, ctx.tol)?;
    Ok((doc, m))
}

/// `{dim, is_factor, center_dim, ...}` with the closure and center residuals.
fn algebra_record(m: &OperatorAlgebra, ctx: &mut Ctx) -> Result<Value, CliError> {
    let inv = ctx.residual("algebra_closure", m.invariant_residuals().max());
    let z = center(m, ctx.tol)?;
    let gens = m.generating_set();
    let zr = z
        .basis()
        .iter()
        .flat_map(|c| gens.iter().map(move |g| c.commutator(g).fro_norm()))
        .fold(0.0, f64::max);
    let zr = ctx.residual("center_commutation", zr);
    Ok(json!({
        "ambient_dim": m.ambient_dim(),
        "dim": m.dim(),
        "is_factor": z.dim() == 1,
        "center_dim": z.dim(),
        "closure_residual": inv,
        "center_residual": zr,
        "basis": ctx.matrices(m.basis()),
    }))
}

fn decomposition_record(m: &OperatorAlgebra, ctx: &mut Ctx) -> Result<Value, CliError> {
    let dec = block_decompose(m, ctx.tol)?;
    let pattern = m
        .basis()
        .iter()
        .map(|b| dec.pattern_residual(b))
        .fold(0.0, f64::max);
    let pattern = ctx.residual("block_pattern", pattern);
    let unitary = ctx.residual(
        "block_unitary",
        dec.w.adjoint().matmul(&dec.w).dist(&Mat::identity(dec.w.cols())),
    );
    let ty = if dec.is_factor() {
        format!("I_{}", dec.blocks[0].n)
    } else {
        "non-factor".to_string()
    };
    Ok(json!({
        "blocks": dec.blocks.iter().map(|b| json!({"n": b.n, "m": b.m})).collect::<Vec<_>>(),
        "center_dim": dec.blocks.len(),
        "type": ty,
        "pattern_residual": pattern,
        "unitary_residual": unitary,
        "w": ctx.matrix(&dec.w),
    }))
}

fn algebra(cmd: &AlgebraCmd, ctx: &mut Ctx) -> Result<Value, CliError> {
    match cmd {
        AlgebraCmd::Generate { input } => {
            let (_, m) = load_algebra(input, ctx)?;
            algebra_record(&m, ctx)
        }
        AlgebraCmd::Commutant { input } => {
            let doc: AlgebraDoc = read_doc(input)?;
            let c = commutant(doc.ambient_dim, &doc.generators()?, ctx.tol)?;
            algebra_record(&c, ctx)
        }
        AlgebraCmd::Center { input } => {
            let (_, m) = load_algebra(input, ctx)?;
            let z = center(&m, ctx.tol)?;
            let mut rec = algebra_record(&z, ctx)?;
            rec["algebra_dim"] = json!(m.dim());
            Ok(rec)
        }
        AlgebraCmd::Decompose { input } => {
            let (doc, m) = load_algebra(input, ctx)?;
            let mut rec = decomposition_record(&m, ctx)?;
            if let (Some(p), Some(q)) = (&doc.p, &doc.q) {
                let cmp = Comparison::new(&m, ctx.tol)?;
                let p = cmp.projection(&p.to_mat("p")?, "p")?;
                let q = cmp.projection(&q.to_mat("q")?, "q")?;
                let eq = cmp.mvn_equivalent(&p, &q)?;
                let defect = eq.witness.as_ref().map_or(0.0, |u| {
                    u.adjoint().matmul(u).dist(&p) + u.matmul(&u.adjoint()).dist(&q)
                });
                let defect = ctx.residual("witness", defect);
                rec["comparison"] = json!({
                    "p_rank_profile": cmp.rank_profile(&p),
                    "q_rank_profile": cmp.rank_profile(&q),
                    "equivalent": eq.equivalent,
                    "p_subordinate_q": cmp.subordinate(&p, &q)?,
                    "q_subordinate_p": cmp.subordinate(&q, &p)?,
                    "kaplansky": cmp.kaplansky_check(&p, &q)?,
                    "witness_residual": defect,
                    "u": eq.witness.as_ref().map_or(Value::Null, |u| ctx.matrix(u)),
                });
            } else if doc.p.is_some() || doc.q.is_some() {
                return Err(CliError::validation("comparison needs both p and q"));
            }
            Ok(rec)
        }
    }
}

fn load_group(input: &GroupInput) -> Result<FiniteGroup, CliError> {
    match (&input.input, &input.builtin) {
        (_, Some(name)) => Ok(FiniteGroup::builtin(name)?),
        (Some(path), None) => read_doc::<GroupDoc>(path)?.to_group(),
        (None, None) => Err(CliError::validation("give a group document or --builtin")),
    }
}

fn group(cmd: &GroupCmd, ctx: &mut Ctx) -> Result<Value, CliError> {
    match cmd {
        GroupCmd::Lvna(input) => {
            let g = load_group(input)?;
            let la = group_algebra(&g, ctx.tol)?;
            let mut rec = algebra_record(&la.algebra, ctx)?;
            rec["order"] = json!(g.order());
            rec["decomposition"] = decomposition_record(&la.algebra, ctx)?;
            let tr = la
                .unitaries
                .iter()
                .map(|u| trace_with(&la.tau, u).re)
                .collect::<Vec<_>>();
            rec["tau_on_group"] = json!(tr);
            rec["tau"] = ctx.matrix(&la.tau);
            Ok(rec)
        }
        GroupCmd::Profile(input) => {
            let g = load_group(input)?;
            let p = center_profile(&g, ctx.tol)?;
            Ok(json!({
                "order": g.order(),
                "abelian": g.is_abelian(),
                "center_dim": p.center_dim,
                "conjugacy_class_count": p.conjugacy_class_count,
                "conjugacy_classes": g.conjugacy_classes(),
                "is_factor": p.is_factor,
            }))
        }
    }
}

fn action(cmd: &ActionCmd, ctx: &mut Ctx) -> Result<Value, CliError> {
    let path = match cmd {
        ActionCmd::Analyze { input }
        | ActionCmd::Crossed { input }
        | ActionCmd::CrossedNs { input }
        | ActionCmd::Bridge { input } => input,
    };
    let a = read_doc::<ActionDoc>(path)?.to_action()?;
    match cmd {
        ActionCmd::Analyze { .. } => {
            let an = action_analysis(&a)?;
            Ok(json!({
                "measure_preserving": an.measure_preserving,
                "free": an.free,
                "ergodic": an.ergodic,
                "orbits": a.orbits(),
            }))
        }
        ActionCmd::Crossed { .. } => {
            let cp = crossed_product(&a, ctx.tol)?;
            let mut rec = algebra_record(&cp.algebra, ctx)?;
            rec["decomposition"] = decomposition_record(&cp.algebra, ctx)?;
            if let Some(tau) = &cp.tau {
                let on: Vec<f64> = cp.multipliers.iter().map(|m| trace_with(tau, m).re).collect();
                rec["tau_on_point_indicators"] = json!(on);
            }
            Ok(rec)
        }
        ActionCmd::CrossedNs { .. } => {
            let cp = crossed_product_nonsingular(&a, ctx.tol)?;
            algebra_record(&cp.algebra, ctx)
        }
        ActionCmd::Bridge { .. } => {
            let v = gms_fm_bridge(&a, ctx.tol)?;
            let e = a.orbit_relation()?;
            let cp = crossed_product(&a, ctx.tol)?;
            let fm = fm_algebra(&e, ctx.tol)?;
            let mut ur: f64 = 0.0;
            for u in &cp.unitaries {
                ur = ur.max(fm_membership_residual(&e, &v.conjugate(u))?);
            }
            let mr = cp
                .multipliers
                .iter()
                .map(|m| fm.diag.residual(&v.conjugate(m)))
                .fold(0.0, f64::max);
            let vr = v.adjoint().matmul(&v).dist(&Mat::identity(v.rows()));
            Ok(json!({
                "dim": v.rows(),
                "unitary_residual": ctx.residual("bridge_unitary", vr),
                "action_unitaries_residual": ctx.residual("bridge_unitaries", ur),
                "multipliers_residual": ctx.residual("bridge_multipliers", mr),
                "v": ctx.matrix(&v),
            }))
        }
    }
}

fn relation(cmd: &RelationCmd, ctx: &mut Ctx) -> Result<Value, CliError> {
    let path = match cmd {
        RelationCmd::Measures { input }
        | RelationCmd::Mvna { input }
        | RelationCmd::Cartan { input }
        | RelationCmd::RightCommutant { input } => input,
    };
    let e = read_doc::<RelationDoc>(path)?.to_relation()?;
    match cmd {
        RelationCmd::Measures { .. } => {
            let rm = rel_measures(&e);
            let d: Vec<f64> = e.pairs().iter().map(|&(x, y)| rm.d.get(x, y).re).collect();
            Ok(json!({
                "pairs": e.pairs(),
                "mu_star": rm.mu_star,
                "mu_costar": rm.mu_costar,
                "d": d,
                "invariant_measure": e.is_invariant_measure(),
            }))
        }
        RelationCmd::Mvna { .. } => {
            let fm = fm_algebra(&e, ctx.tol)?;
            let mut rec = algebra_record(&fm.algebra, ctx)?;
            rec["diag_dim"] = json!(fm.diag.dim());
            rec["ergodic"] = json!(e.is_ergodic());
            rec["decomposition"] = decomposition_record(&fm.algebra, ctx)?;
            Ok(rec)
        }
        RelationCmd::Cartan { .. } => {
            let c = cartan_factor_trace(&e, ctx.tol)?;
            let n = e.num_points();
            let on = c.tau.as_ref().map(|tau| {
                (0..n)
                    .map(|x| trace_with(tau, &left_operator_matrix(&e, &Mat::unit(n, x, x))).re)
                    .collect::<Vec<f64>>()
            });
            Ok(json!({
                "maximal_abelian": c.maximal_abelian,
                "regular": c.regular,
                "is_factor": c.is_factor,
                "tau_on_point_indicators": on,
            }))
        }
        RelationCmd::RightCommutant { .. } => {
            let r = right_commutant_check(&e, ctx.tol)?;
            Ok(json!({
                "commute_ok": r.commute_ok,
                "equality_ok": r.equality_ok,
                "max_commutator": ctx.residual("left_right_commutator", r.max_commutator),
            }))
        }
    }
}

fn tensor(cmd: &TensorCmd, ctx: &mut Ctx) -> Result<Value, CliError> {
    match cmd {
        TensorCmd::Kron { first, second } => {
            let (_, a) = load_algebra(first, ctx)?;
            let (_, b) = load_algebra(second, ctx)?;
            let k = kron_algebra(&a, &b);
            algebra_record(&k, ctx)
        }
        TensorCmd::Itpfi { input, k } => {
            let list = read_doc::<EigenvalueListDoc>(input)?.to_list()?;
            let k = k.unwrap_or(list.len());
            let tr = itpfi_truncate(&list, k)?;
            let xi_norm = ctx.residual("xi_norm", (tr.xi.fro_norm() - 1.0).abs());
            Ok(json!({
                "k": k,
                "ambient_dim": tr.ambient_dim(),
                "type": tr.type_label.to_string(),
                "tracial": tr.tracial,
                "rho_eigenvalues": tr.rho_eigenvalues(),
                "materialized": tr.algebra.is_some(),
                "xi_norm_residual": xi_norm,
                "rho": ctx.matrix(&tr.rho),
            }))
        }
        TensorCmd::Powers { lambda, k } => {
            let list = powers_list(*lambda, *k)?;
            Ok(json!({ "lambda": lambda, "k": k, "rows": list.rows() }))
        }
        TensorCmd::Odometer { k, alpha } => {
            let alphas = match alpha.len() {
                1 => vec![alpha[0]; *k],
                _ => alpha.clone(),
            };
            let ob = odometer_bridge(*k, &alphas, ctx.tol)?;
            Ok(json!({
                "k": k,
                "alphas": alphas,
                "points": ob.relation.num_points(),
                "matched": ob.matched,
                "residual": ctx.residual("odometer", ob.residual),
                "v": ctx.matrix(&ob.v),
            }))
        }
    }
}

fn rep(cmd: &RepCmd, ctx: &mut Ctx) -> Result<Value, CliError> {
    let load = |p: &Path| read_doc::<RepDoc>(p).and_then(|d| d.to_rep(ctx.tol));
    match cmd {
        RepCmd::Intertwine { pi, sigma } => {
            let (pi, sigma) = (load(pi)?, load(sigma)?);
            let basis = intertwiners(&pi, &sigma, ctx.tol)?;
            let r = basis
                .iter()
                .flat_map(|t| {
                    pi.matrices()
                        .iter()
                        .zip(sigma.matrices())
                        .map(move |(p, s)| t.matmul(p).dist(&s.matmul(t)))
                })
                .fold(0.0, f64::max);
            Ok(json!({
                "dim": basis.len(),
                "disjoint": basis.is_empty(),
                "intertwining_residual": ctx.residual("intertwining", r),
                "basis": ctx.matrices(&basis),
            }))
        }
        RepCmd::Diagnose { input } => {
            let pi = load(input)?;
            let d = rep_diagnostics(&pi, ctx.tol)?;
            let ty = d.type_label.map_or("non-factor".to_string(), |t| t.to_string());
            Ok(json!({
                "dim": pi.dim(),
                "r_pi": algebra_record(&d.r_pi, ctx)?,
                "irreducible": d.irreducible,
                "factor_rep": d.factor_rep,
                "type": ty,
            }))
        }
        RepCmd::Decompose { input } => {
            let pi = load(input)?;
            let pieces = mackey_decompose(&pi, ctx.tol)?;
            let mut rec = Vec::new();
            for (i, p) in pieces.iter().enumerate() {
                let comm = pi
                    .matrices()
                    .iter()
                    .map(|u| p.z.commutator(u).fro_norm())
                    .fold(0.0, f64::max);
                let mut disjoint = true;
                for q in &pieces[..i] {
                    disjoint &= is_disjoint(&p.sub, &q.sub, ctx.tol)?;
                }
                rec.push(json!({
                    "irrep_dim": p.irrep_dim,
                    "multiplicity": p.multiplicity,
                    "range_dim": p.basis.cols(),
                    "disjoint_from_previous": disjoint,
                    "invariance_residual": ctx.residual("piece_invariance", comm),
                    "z": ctx.matrix(&p.z),
                }));
            }
            let recon = (0..pi.group().order())
                .map(|g| reassemble(&pieces, g).dist(&pi.matrices()[g]))
                .fold(0.0, f64::max);
            Ok(json!({
                "pieces": rec,
                "reconstruction_residual": ctx.residual("reconstruction", recon),
            }))
        }
    }
}
