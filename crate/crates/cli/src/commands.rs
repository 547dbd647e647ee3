//! One function per subcommand, each returning the JSON payload.

use crate::complexes;
use crate::config::RunConfig;
use crate::{CliError, Result};
use nygaard_core::derham_witt::build_torus;
use nygaard_core::filtered_homalg::{eta, eta_cohomology_law_check, Complex, Scalar};
use nygaard_core::linalg::{AbelianGroup, PGroup};
use nygaard_core::pd_crystalline::PdAlgebra;
use nygaard_core::q_derham::build_qtorus;
use nygaard_core::report::CheckReport;
use nygaard_core::syntomic::{self, Model};
use nygaard_core::witt::ring::{BaseRing, Elem};
use nygaard_core::witt::{build_perfectoid_square, SquareModel, WittVector};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const COMMANDS: &[&str] = &["witt", "eta", "derham", "qderham", "acrys", "syntomic"];

pub fn run(command: &str, cfg: &RunConfig) -> Result<Value> {
    match command {
        "witt" => cmd_witt(cfg),
        "eta" => cmd_eta(cfg),
        "derham" => cmd_derham(cfg),
        "qderham" => cmd_qderham(cfg),
        "acrys" => cmd_acrys(cfg),
        "syntomic" => cmd_syntomic(cfg),
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn pgroups(gs: &[PGroup]) -> Value {
    to_json(&gs)
}

fn abelian(g: &AbelianGroup) -> Value {
    json!({
        "free_rank": g.free_rank,
        "torsion": g.torsion.iter().map(BigInt::to_string).collect::<Vec<_>>(),
    })
}

/// Per-weight reports shrink to a count and the sorted failing weights.
pub fn summarize(r: &CheckReport) -> Value {
    let mut failures: Vec<Vec<i64>> = r.failures().map(|row| row.weight.clone()).collect();
    failures.sort();
    json!({
        "check": r.check,
        "i": r.i,
        "holds": r.holds,
        "weights": r.rows.len(),
        "failures": failures,
    })
}

fn random_elem(rng: &mut impl Rng, ring: &BaseRing, p: u64) -> Elem {
    let v: Vec<BigInt> = (0..ring.width()).map(|_| BigInt::from(rng.gen_range(0..p))).collect();
    ring.reduce(&v)
}

fn random_witt(rng: &mut impl Rng, p: u64, ring: &BaseRing, n: usize) -> WittVector {
    WittVector::new(p, ring.clone(), (0..n).map(|_| random_elem(rng, ring, p)).collect())
}

/// Counts of instances where each Witt law holds over `W_n(F_p[x]/(x^k))`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WittLaws {
    pub instances: usize,
    pub ghost_hom: usize,
    pub fv_is_p: usize,
    pub f_teichmuller: usize,
    pub v_projection: usize,
}

impl WittLaws {
    pub fn holds(&self) -> bool {
        [self.ghost_hom, self.fv_is_p, self.f_teichmuller, self.v_projection].iter().all(|&c| c == self.instances)
    }
}

pub fn witt_laws(p: u64, n: usize, k: u32, instances: usize, seed: u64) -> Result<WittLaws> {
    if n < 2 {
        return Err(CliError::Usage("Witt law checks need length n ≥ 2".into()));
    }
    let ring = BaseRing::Truncated { p, k };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 32) ^ n as u64);
    let pw = WittVector::from_integer(p, &ring, p as i64, n)?;
    let mut out = WittLaws { instances, ..Default::default() };
    for _ in 0..instances {
        let (a, b) = (random_witt(&mut rng, p, &ring, n), random_witt(&mut rng, p, &ring, n));
        let (ga, gb) = (a.ghost(), b.ghost());
        let sum: Vec<Elem> = ga.iter().zip(&gb).map(|(x, y)| ring.add(x, y)).collect();
        let prod: Vec<Elem> = ga.iter().zip(&gb).map(|(x, y)| ring.mul(x, y)).collect();
        out.ghost_hom += usize::from(a.add(&b)?.ghost() == sum && a.mul(&b)?.ghost() == prod);
        out.fv_is_p += usize::from(a.verschiebung().frobenius()? == a.mul(&pw)?);
        let t = random_elem(&mut rng, &ring, p);
        let lhs = WittVector::teichmuller(p, &ring, &t, n + 1).frobenius()?;
        out.f_teichmuller += usize::from(lhs == WittVector::teichmuller(p, &ring, &ring.pow(&t, p), n));
        let x = a.truncate(n - 1);
        let v_lhs = x.verschiebung().mul(&b)?;
        let v_rhs = x.mul(&b.frobenius()?)?.verschiebung();
        out.v_projection += usize::from(v_lhs == v_rhs);
    }
    Ok(out)
}

/// Relations of the perfectoid square, by name.
pub fn square_relations(model: SquareModel) -> Value {
    let checks = build_perfectoid_square(model).verify();
    let holds = checks.iter().all(|c| c.holds);
    json!({
        "holds": holds,
        "relations": checks.iter().map(|c| json!({"name": c.name, "holds": c.holds})).collect::<Vec<_>>(),
    })
}

pub fn cmd_witt(cfg: &RunConfig) -> Result<Value> {
    let (p, n) = (cfg.p, cfg.n);
    let laws = witt_laws(p, n as usize, 3, 20, 0x5eed)?;
    let ring = BaseRing::Truncated { p, k: 3 };
    let tx = WittVector::teichmuller(p, &ring, &ring.x(), n as usize);
    let one_plus_one = WittVector::one(p, &ring, n as usize).add(&WittVector::one(p, &ring, n as usize))?;
    let show = |w: &WittVector| -> Vec<Vec<String>> {
        w.coords.iter().map(|c| c.iter().map(BigInt::to_string).collect()).collect()
    };
    Ok(json!({
        "ring": format!("W_{n}(F_{p}[x]/(x^3))"),
        "laws": {
            "instances": laws.instances,
            "ghost_hom": laws.ghost_hom,
            "fv_is_p": laws.fv_is_p,
            "f_teichmuller": laws.f_teichmuller,
            "v_projection": laws.v_projection,
            "holds": laws.holds(),
        },
        "ghost_teichmuller_x": show(&WittVector::new(p, ring.clone(), tx.ghost())),
        "one_plus_one": show(&one_plus_one),
        "perfectoid_fp": square_relations(SquareModel::Fp { p, n }),
        "perfectoid_q": square_relations(SquareModel::Q { p, n, n_trunc: cfg.n_trunc }),
    }))
}

fn parse_scalar(f: &str, p: u64) -> Result<Scalar> {
    let v: i64 = match f {
        "p" => p as i64,
        "p2" => (p * p) as i64,
        other => other
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid --f `{other}` (an integer, p or p2)")))?,
    };
    if v == 0 {
        return Err(CliError::Usage("--f must be nonzero".into()));
    }
    Ok(Scalar::int(v))
}

pub fn cmd_eta(cfg: &RunConfig) -> Result<Value> {
    let c: Complex = complexes::named(&cfg.fixture, cfg.p)?;
    let f = parse_scalar(&cfg.f, cfg.p)?;
    let Scalar::Int(fv) = &f else { unreachable!() };
    let f2 = Scalar::Int(fv * fv);
    let once = eta(&f, &c)?;
    let twice = eta(&f, &once.complex)?;
    let square = eta(&f2, &c)?;
    let law = eta_cohomology_law_check(&f, &c)?;
    let h_twice = twice.cohomology()?;
    let h_square = square.cohomology()?;
    Ok(json!({
        "complex": cfg.fixture,
        "f": fv.to_string(),
        "h": c.cohomology_z()?.iter().map(abelian).collect::<Vec<_>>(),
        "h_eta": once.cohomology()?.iter().map(abelian).collect::<Vec<_>>(),
        "law": {
            "holds": law.holds,
            "rows": law.rows.iter().map(|r| json!({
                "degree": r.degree,
                "eta": abelian(&r.eta),
                "expected": abelian(&r.expected),
                "holds": r.holds,
            })).collect::<Vec<_>>(),
        },
        "composition": {
            "holds": h_twice == h_square,
            "h_eta_eta": h_twice.iter().map(abelian).collect::<Vec<_>>(),
            "h_eta_square": h_square.iter().map(abelian).collect::<Vec<_>>(),
        },
    }))
}

pub fn cmd_derham(cfg: &RunConfig) -> Result<Value> {
    let x = build_torus(cfg.p, cfg.d, cfg.n)?;
    let m = cfg.box_bound();
    let i = cfg.i;
    let zero = vec![0; cfg.d];
    let mut out = serde_json::Map::new();
    out.insert("weight0_cohomology".into(), pgroups(&x.block_cohomology(&zero)?));
    out.insert("frobenius_chain_map".into(), json!(x.frobenius_is_chain_map(m)));
    out.insert("frobenius_eta".into(), summarize(&x.frobenius_eta_check(i, m)?));
    if i >= 0 {
        out.insert("conjugate".into(), summarize(&x.conjugate_check(i, m)?));
        out.insert("hodge_quotient".into(), summarize(&x.hodge_quotient_check(i, m)?));
    }
    if i >= 1 && i as usize <= cfg.d {
        let vectors: Vec<Vec<i64>> =
            (0..i as usize).map(|k| (0..cfg.d).map(|t| i64::from(t == k)).collect()).collect();
        let class = x.dlog_class(&vectors)?;
        out.insert(
            "dlog".into(),
            json!({"degree": class.degree, "closed": class.closed, "phi_fixed": class.phi_fixed}),
        );
    }
    Ok(Value::Object(out))
}

pub fn cmd_qderham(cfg: &RunConfig) -> Result<Value> {
    let x = build_qtorus(cfg.d, cfg.p, cfg.n_trunc)?;
    let m = cfg.box_bound();
    let rep = x.lnu_identification_check(cfg.i.max(0), cfg.n, m)?;
    Ok(json!({
        "frobenius_chain_map": x.frobenius_is_chain_map(m),
        "frobenius_in_eta": summarize(&rep.frobenius_in_eta),
        "nygaard_in_fil": rep.nygaard_in_fil.iter().map(summarize).collect::<Vec<_>>(),
        "graded": rep.graded.iter().map(summarize).collect::<Vec<_>>(),
        "holds": rep.holds,
    }))
}

fn pd_algebra(cfg: &RunConfig) -> Result<PdAlgebra> {
    let n = if cfg.model == Model::Acrys { cfg.r } else { cfg.n };
    Ok(PdAlgebra::new(cfg.p, cfg.d, cfg.e, n, cfg.weight_bound())?)
}

pub fn cmd_acrys(cfg: &RunConfig) -> Result<Value> {
    let a = PdAlgebra::new(cfg.p, cfg.d, cfg.e, cfg.n, cfg.weight_bound())?;
    let i = cfg.i;
    let fixed = a.frobenius_fixed_points(i)?;
    let mut out = serde_json::Map::new();
    out.insert("basis_size".into(), json!(a.basis().len()));
    out.insert("phi_pth_power".into(), to_json(&a.phi_pth_power_check(&[])?));
    out.insert("conj_descriptions".into(), to_json(&a.conj_descriptions_agree(2)));
    out.insert("conj_graded_map".into(), to_json(&a.conj_graded_map_check()));
    if a.depth >= 1 && i >= 0 {
        out.insert("nygaard_graded_image".into(), to_json(&a.nygaard_graded_image_check(i)?));
    }
    out.insert("fixed_points".into(), json!({"i": i, "group": to_json(&fixed.group), "weight_bound": fixed.weight_bound}));
    Ok(Value::Object(out))
}

pub fn cmd_syntomic(cfg: &RunConfig) -> Result<Value> {
    let (p, d, i, r) = (cfg.p, cfg.d, cfg.i, cfg.r);
    match cfg.model {
        Model::Acrys => {
            let a = pd_algebra(cfg)?;
            let res = syntomic::syntomic_acrys(&a, i)?;
            let table = syntomic::k_theory_table(&a, i.max(0) as u32)?;
            Ok(json!({"result": to_json(&res), "k_theory": to_json(&table)}))
        }
        Model::Charp | Model::Q => {
            let m = cfg.box_bound();
            let res = match (cfg.model, cfg.cap) {
                (Model::Charp, Some(v)) => syntomic::syntomic_charp(p, d, i, r, m, v)?,
                (Model::Q, Some(v)) => syntomic::syntomic_q(p, d, i, r, cfg.n_trunc, m, v)?,
                (model, _) => syntomic::minimal_orbit_cap(model, p, d, i, r, cfg.n_trunc, m, r + 4)?,
            };
            let mut out = serde_json::Map::new();
            out.insert("result".into(), to_json(&res));
            if cfg.model == Model::Q {
                out.insert("degree_bound".into(), to_json(&syntomic::degree_bound_check(p, d, i, r, cfg.n_trunc)?));
                if i >= 0 {
                    let bound = syntomic::contraction_bound(p, i);
                    let c = syntomic::contraction_bound_check(p, d, i, bound, cfg.n_trunc)?;
                    out.insert("contraction".into(), to_json(&c));
                }
            }
            Ok(Value::Object(out))
        }
    }
}
