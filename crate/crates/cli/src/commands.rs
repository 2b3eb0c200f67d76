//! One function per subcommand, each filling a [`Report`].

use destab_core::cone::sphere_kkt_rays;
use destab_core::gauge::{
    bundle_optimal, global_optimal_over_lattice, hn_chains_brute_force, hn_filtration, limit_object, pair_hn,
    pair_hn_candidates, pair_optimal, pair_semistable, HnType, QuotientDescriptor, SubobjectLattice,
};
use destab_core::gl::{
    chain_invariants, chain_limit, chain_semistable, hom_cross_check, hom_optimal, ChainProblem, HomProblem, HomVerdict,
};
use destab_core::linalg::RationalMatrix;
use destab_core::rational::{dot, format_rational, int, primitive_integer_vector, to_f64};
use destab_core::torus::{hermitian_class, Destabilization, StratumClass, SupportVector};
use destab_core::{Rational, SignedSquare};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::input::TorusProblem;
use crate::report::{
    rational_rows, rationals, ChainStage, Check, ClassStage, Component, ExtendedValue, FiltrationStage, HomStage,
    LimitStage, Optimal, Quotient, Report, StratumReport, TorusStage, Verdict,
};
use crate::CliError;

const FLOAT_SAMPLES: usize = 20_000;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub verify: bool,
    pub seed: u64,
}

fn core(what: &'static str) -> impl Fn(destab_core::Error) -> CliError {
    move |e| CliError::from_core(e, what)
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

fn torus_verdict(p: &TorusProblem, report: &mut Report) -> Result<Destabilization, CliError> {
    let d = p.action.optimal_destabilizing(&p.point).map_err(core("payload"))?;
    match &d {
        Destabilization::Unstable(o) => {
            report.verdict = Some(Verdict::Unstable);
            report.optimal = Some(Optimal::from_ray(&o.ray, &o.lambda_inf));
        }
        Destabilization::Semistable { value } => {
            report.verdict = Some(Verdict::Semistable);
            report.minimum = Some(ExtendedValue::new(value));
        }
    }
    Ok(d)
}

/// Exhaustive KKT enumeration and random sampling of the unit sphere.
fn torus_oracles(p: &TorusProblem, d: &Destabilization, seed: u64) -> Result<Vec<Check>, CliError> {
    let metric = p.action.metric();
    let cone = p.action.finite_cone(&p.point).map_err(core("payload"))?;
    let rays = sphere_kkt_rays(metric, &cone, p.action.tau()).map_err(core("payload"))?;
    let mut checks = Vec::new();
    let (unique, reference) = match d.optimal() {
        Some(o) => (rays.len() == 1 && rays[0] == o.ray, Some(o)),
        None => (rays.is_empty(), None),
    };
    checks.push(check("kkt-enumeration", unique, format!("{} KKT ray(s)", rays.len())));

    let n = p.action.weights().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = reference.map_or(0.0, |o| o.lambda_inf.to_f64());
    let anchor: Vec<i64> = reference
        .map(|o| o.ray.normalized_f64().iter().map(|x| (x * 64.0).round() as i64).collect())
        .unwrap_or_else(|| vec![0; n]);
    let mut worst = f64::INFINITY;
    let mut finite = 0usize;
    for i in 0..FLOAT_SAMPLES {
        let s: Vec<Rational> = (0..n)
            .map(|j| {
                let noise = rng.random_range(-4..=4i64);
                int(if i % 2 == 0 { anchor[j] + noise } else { rng.random_range(-64..=64i64) })
            })
            .collect();
        if s.iter().all(|x| *x == int(0)) {
            continue;
        }
        let w = p.action.maximal_weight(&p.point, &s).map_err(core("payload"))?;
        if let Some(w) = w.finite() {
            finite += 1;
            let value = to_f64(w) / to_f64(&metric.norm_sq(&s)).sqrt();
            worst = worst.min(value - target);
        }
    }
    let passed = worst >= -1e-9;
    let detail = if finite == 0 {
        "no finite samples".to_string()
    } else {
        format!("{finite} finite samples, smallest excess {worst:.3e}")
    };
    checks.push(check("float-sampling", passed, detail));
    Ok(checks)
}

pub fn check_cmd(p: &TorusProblem, opts: Options, report: &mut Report) -> Result<(), CliError> {
    let d = torus_verdict(p, report)?;
    if opts.verify {
        report.verification = torus_oracles(p, &d, opts.seed)?;
    }
    Ok(())
}

pub fn destab_cmd(p: &TorusProblem, opts: Options, report: &mut Report) -> Result<(), CliError> {
    let d = torus_verdict(p, report)?;
    if let Some(o) = d.optimal() {
        let cone = p.action.finite_cone(&p.point).map_err(core("payload"))?;
        report.torus = Some(TorusStage {
            direction: rationals(o.ray.direction()),
            initial_covector: rationals(&p.action.initial_covector(&p.point).map_err(core("payload"))?),
            finite_cone_rows: rational_rows(cone.constraints()),
            certificate: crate::report::Certificate::new(&o.certificate),
        });
    }
    if opts.verify {
        report.verification = torus_oracles(p, &d, opts.seed)?;
    }
    Ok(())
}

fn component_list(v: &SupportVector) -> Vec<Component> {
    v.components()
        .iter()
        .map(|(label, amp)| Component {
            label: label.clone(),
            amp_sq: format_rational(amp),
        })
        .collect()
}

pub fn limit_cmd(p: &TorusProblem, opts: Options, report: &mut Report) -> Result<(), CliError> {
    let d = torus_verdict(p, report)?;
    if d.is_semistable() {
        return Ok(());
    }
    let l = p.action.verify_limit_semistable(&p.point).map_err(core("payload"))?;
    let pairing = dot(&l.induced.tau_prime, l.optimal.ray.direction());
    report.limit = Some(LimitStage {
        support: component_list(&l.limit),
        induced_weights: l.induced.weights.weights().iter().map(|w| w.label.clone()).collect(),
        tau_prime: rationals(&l.induced.tau_prime),
        tau_prime_pairing: format_rational(&pairing),
        induced_verdict: if l.induced_verdict.is_semistable() {
            Verdict::Semistable
        } else {
            Verdict::Unstable
        },
        semistable: l.semistable,
    });
    if opts.verify {
        let mut checks = torus_oracles(p, &d, opts.seed)?;
        checks.push(check("limit-semistable", l.semistable, "induced problem at the limit"));
        checks.push(check("tau-prime-orthogonal", pairing == int(0), format_rational(&pairing)));
        let decayed = l
            .limit
            .support()
            .iter()
            .filter_map(|label| l.induced.weights.get(label))
            .all(|w| dot(&w.chi, l.optimal.ray.direction()) == int(0));
        checks.push(check("limit-weights-fixed", decayed, "surviving weights pair to zero with the ray"));
        report.verification = checks;
    }
    Ok(())
}

pub fn strata_cmd(p: &TorusProblem, opts: Options, report: &mut Report) -> Result<(), CliError> {
    let strata = p.action.enumerate_strata().map_err(core("payload.weights"))?;
    report.strata = Some(
        strata
            .iter()
            .map(|s| match &s.class {
                StratumClass::Semistable => StratumReport {
                    verdict: Verdict::Semistable,
                    optimal: None,
                    supports: s.supports.clone(),
                },
                StratumClass::Unstable { ray, lambda_inf } => StratumReport {
                    verdict: Verdict::Unstable,
                    optimal: Some(Optimal::from_ray(ray, lambda_inf)),
                    supports: s.supports.clone(),
                },
            })
            .collect(),
    );
    if opts.verify {
        let total: usize = strata.iter().map(|s| s.supports.len()).sum();
        let expected = 1usize << p.action.weights().len();
        let mut consistent = true;
        for s in &strata {
            for support in &s.supports {
                let d = p
                    .action
                    .optimal_destabilizing(&SupportVector::supported_on(support))
                    .map_err(core("payload"))?;
                consistent &= match (&s.class, d.optimal()) {
                    (StratumClass::Semistable, None) => true,
                    (StratumClass::Unstable { ray, lambda_inf }, Some(o)) => o.ray == *ray && o.lambda_inf == *lambda_inf,
                    _ => false,
                };
            }
        }
        report.verification = vec![
            check("partition", total == expected, format!("{total} of {expected} supports")),
            check("per-support", consistent, "each support re-solved independently"),
        ];
    }
    Ok(())
}

fn flat_primitive(m: &RationalMatrix) -> Vec<String> {
    let flat: Vec<Rational> = m.to_rows().into_iter().flatten().collect();
    primitive_integer_vector(&flat).iter().map(ToString::to_string).collect()
}

fn random_invertible(rng: &mut impl Rng, n: usize) -> RationalMatrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| int(rng.random_range(-3..=3))).collect()).collect();
        let m = RationalMatrix::from_rows(rows, n).expect("square");
        if m.rank() == n {
            return m;
        }
    }
}

pub fn hom_cmd(p: &HomProblem, opts: Options, report: &mut Report) -> Result<(), CliError> {
    let verdict = hom_optimal(p);
    let lambda = match &verdict {
        HomVerdict::Semistable => {
            report.verdict = Some(Verdict::Semistable);
            report.hom = Some(HomStage {
                kernel_dim: 0,
                kernel_basis: Vec::new(),
                projector: None,
            });
            None
        }
        HomVerdict::Unstable(o) => {
            report.verdict = Some(Verdict::Unstable);
            report.optimal = Some(Optimal::new(flat_primitive(&o.ray), &o.lambda_inf));
            report.hom = Some(HomStage {
                kernel_dim: o.kernel_dim(),
                kernel_basis: rational_rows(&o.kernel_basis),
                projector: Some(rational_rows(&o.projector.to_rows())),
            });
            Some(o.lambda_inf.clone())
        }
    };
    if opts.verify {
        let mut checks = Vec::new();
        if lambda.is_some() {
            let agrees = hom_cross_check(p).map_err(core("payload"))?;
            checks.push(check("adapted-torus", agrees, "torus problem in a kernel-adapted basis"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let u = random_invertible(&mut rng, p.f().cols());
        let moved = p.act(&u).map_err(core("payload"))?;
        let moved_lambda = match hom_optimal(&moved) {
            HomVerdict::Semistable => None,
            HomVerdict::Unstable(o) => Some(o.lambda_inf),
        };
        checks.push(check("gauge-invariance", moved_lambda == lambda, "lambda_inf after a random change of basis"));
        report.verification = checks;
    }
    Ok(())
}

pub fn chain_cmd(p: &ChainProblem, opts: Options, report: &mut Report) -> Result<(), CliError> {
    let inv = chain_invariants(p);
    let semistable = chain_semistable(p);
    report.verdict = Some(if semistable { Verdict::Semistable } else { Verdict::Unstable });
    let mut stage = ChainStage {
        dims: p.dims(),
        monotone_dims: inv.monotone_dims,
        ranks: inv.ranks.clone(),
        kernels: inv.kernels.iter().map(|k| rational_rows(k)).collect(),
        flag: inv.images.iter().map(|k| rational_rows(k)).collect(),
        quotient_maps: None,
        limit_stable: None,
    };
    let limit = if semistable {
        None
    } else {
        let l = chain_limit(p).map_err(core("payload"))?;
        stage.quotient_maps = Some(l.quotient_maps.iter().map(|m| rational_rows(&m.to_rows())).collect());
        stage.limit_stable = Some(l.stable);
        Some(l)
    };
    report.chain = Some(stage);
    if opts.verify {
        let mut checks = Vec::new();
        if let Some(l) = &limit {
            checks.push(check("limit-stable", l.stable, "quotient maps are injective"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let dims = p.dims();
        let g: Vec<RationalMatrix> = dims[..dims.len() - 1].iter().map(|&d| random_invertible(&mut rng, d)).collect();
        let moved = p.act(&g).map_err(core("payload"))?;
        let same = chain_invariants(&moved).ranks == inv.ranks && chain_semistable(&moved) == semistable;
        checks.push(check("gauge-invariance", same, "ranks after a random change of basis"));
        report.verification = checks;
    }
    Ok(())
}

fn steps_of(hn_type: &HnType) -> (Vec<[i64; 2]>, Vec<String>) {
    let steps = hn_type.steps();
    (
        steps.iter().map(|s| [i64::from(s.rank), s.degree]).collect(),
        steps.iter().map(|s| format_rational(&s.slope())).collect(),
    )
}

fn quotients(q: Vec<QuotientDescriptor>) -> Vec<Quotient> {
    q.into_iter()
        .map(|q| Quotient {
            rank: q.rank,
            degree: q.degree,
            carries_phi: q.carries_phi,
        })
        .collect()
}

fn global_check(lattice: &SubobjectLattice, tau: Option<&Rational>, chain: &[String], lambda: Option<&SignedSquare>) -> Check {
    match global_optimal_over_lattice(lattice, tau) {
        Ok(g) => {
            let value_ok = match lambda {
                Some(l) => g.lambda_inf.finite() == Some(l),
                None => g.eigenvalues.is_none(),
            };
            let chain_ok = lambda.is_none() || g.chain == chain;
            check(
                "global-optimum",
                value_ok && chain_ok,
                format!("{} maximal chains examined", g.chains_examined),
            )
        }
        Err(e) => check("global-optimum", false, e.to_string()),
    }
}

pub fn bundle_cmd(lattice: &SubobjectLattice, opts: Options, report: &mut Report) -> Result<(), CliError> {
    let hn = hn_filtration(lattice).map_err(core("payload"))?;
    let (hn_type, slopes) = steps_of(&hn.hn_type);
    let mut stage = FiltrationStage {
        chain: hn.chain.clone(),
        hn_type,
        slopes,
        m: None,
        case: None,
        phi_step: None,
        eigenvalues: None,
    };
    let lambda = if hn.is_trivial() {
        report.verdict = Some(Verdict::Semistable);
        None
    } else {
        let opt = bundle_optimal(&hn.hn_type).map_err(core("payload"))?;
        report.verdict = Some(Verdict::Unstable);
        report.optimal = Some(Optimal::from_ray(&opt.ray, &opt.lambda_inf));
        stage.eigenvalues = Some(rationals(opt.ray.direction()));
        report.limit_object = Some(quotients(limit_object(&hn.hn_type, None, None).map_err(core("payload"))?));
        Some(opt.lambda_inf)
    };
    report.filtration = Some(stage);
    if opts.verify {
        let brute = hn_chains_brute_force(lattice).map_err(core("payload.nodes"))?;
        let unique = brute.len() == 1 && brute[0] == hn.chain;
        report.verification = vec![
            check("brute-force-hn", unique, format!("{} HN chain(s) by enumeration", brute.len())),
            global_check(lattice, None, &hn.chain, lambda.as_ref()),
        ];
    }
    Ok(())
}

pub fn pair_cmd(lattice: &SubobjectLattice, tau: &Rational, opts: Options, report: &mut Report) -> Result<(), CliError> {
    if pair_semistable(lattice, tau).map_err(core("payload.tau"))? {
        report.verdict = Some(Verdict::Semistable);
        if opts.verify {
            let candidates = pair_hn_candidates(lattice, tau).map_err(core("payload"))?;
            report.verification = vec![
                check("no-filtration", candidates.is_empty(), format!("{} candidate(s)", candidates.len())),
                global_check(lattice, Some(tau), &[], None),
            ];
        }
        return Ok(());
    }
    let hn = pair_hn(lattice, tau).map_err(core("payload"))?;
    let opt = pair_optimal(&hn.hn_type, hn.phi_step, hn.m, tau).map_err(core("payload"))?;
    let (hn_type, slopes) = steps_of(&hn.hn_type);
    report.verdict = Some(Verdict::Unstable);
    report.optimal = Some(Optimal::from_ray(&opt.optimum.ray, &opt.optimum.lambda_inf));
    report.filtration = Some(FiltrationStage {
        chain: hn.chain.clone(),
        hn_type,
        slopes,
        m: Some(hn.m),
        case: Some(hn.case.to_string()),
        phi_step: hn.phi_step,
        eigenvalues: Some(rationals(opt.optimum.ray.direction())),
    });
    report.limit_object = Some(quotients(
        limit_object(&hn.hn_type, hn.phi_step, Some(hn.m)).map_err(core("payload"))?,
    ));
    if opts.verify {
        let candidates = pair_hn_candidates(lattice, tau).map_err(core("payload"))?;
        report.verification = vec![
            check("unique-filtration", candidates.len() == 1, format!("{} candidate(s)", candidates.len())),
            global_check(lattice, Some(tau), &hn.chain, Some(&opt.optimum.lambda_inf)),
        ];
    }
    Ok(())
}

pub fn class_cmd(s: &[Rational], report: &mut Report) {
    let c = hermitian_class(s);
    report.class = Some(ClassStage {
        eigenvalues: rationals(&c.eigenvalues),
        flag: c.flag_dims,
    });
}
