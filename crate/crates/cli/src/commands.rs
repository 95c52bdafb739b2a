use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use roundgroups::acceptance::{run_all, run_criterion, AcceptOptions, Suite};
use roundgroups::certify::{
    dihedral_certificate, frobenius_divisibility, nilpotence_verdict, symmetric_root_recurrences,
    unroundness_certificate,
};
use roundgroups::construct::{
    ap_cycle, de_bruijn_cycle, interleaved_balanced_cycle, pq_two_round_cycle, totally_round_cycle,
    z2_balanced_depth_search,
};
use roundgroups::cycle::{
    check_dr_balanced, check_k_round, check_strongly_k_round, CheckConfig, Cycle, CycleFile, DVariant, GroupRef,
    SearchPolicy,
};
use roundgroups::semigroup::{bound_check, frobenius_number, k_decision_bound, phi_prime, represent};
use roundgroups::{Error, FiniteGroup, Result};
use serde_json::{json, Value};

use crate::{
    CertifyArgs, Command, ConstructMode, CycleAction, FrobeniusArgs, GroupKind, Outcome, PolicyArg, SuiteArg,
    VariantsArg,
};

const BUDGET_VAR: &str = "ROUNDGROUPS_BUDGET";

fn env_budget() -> Result<Option<u64>> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidParameter(format!("{BUDGET_VAR}={v:?} is not an integer"))),
        Err(_) => Ok(None),
    }
}

fn budget(flag: Option<u64>, default: u64) -> Result<u64> {
    Ok(match flag {
        Some(b) => b,
        None => env_budget()?.unwrap_or(default),
    })
}

fn load_group(path: &Path) -> Result<FiniteGroup> {
    FiniteGroup::from_json(&fs::read_to_string(path)?)
}

fn load_cycle(path: &Path) -> Result<Cycle> {
    let file: CycleFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    file.load(path.parent())
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn missing(flag: &str) -> Error {
    Error::InvalidParameter(format!("--{flag} is required for this mode"))
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Group { kind, out } => group(kind, out),
        Command::Cycle { action } => cycle(action),
        Command::Certify(args) => certify(args),
        Command::Frobenius(args) => frobenius(args),
        Command::Accept { suite, seed, criterion, inject_fault } => accept(suite, seed, criterion, inject_fault),
    }
}

fn group(kind: GroupKind, out: Option<PathBuf>) -> Result<Outcome> {
    let g = match kind {
        GroupKind::Cyclic { n } => FiniteGroup::cyclic(n)?,
        GroupKind::Dihedral { l } => FiniteGroup::dihedral(l)?,
        GroupKind::Symmetric { l } => FiniteGroup::symmetric(l)?,
        GroupKind::Alternating { l } => FiniteGroup::alternating(l)?,
        GroupKind::Dicyclic { m } => FiniteGroup::dicyclic(m)?,
        GroupKind::Product { left, right } => FiniteGroup::direct_product(&load_group(&left)?, &load_group(&right)?)?,
        GroupKind::Pq { p, q } => FiniteGroup::pq(p, q)?,
    };
    let verdict = nilpotence_verdict(&g)?;
    let center_size = g.center().len();
    let roots = g.root_counts();
    let mut payload = json!({
        "name": g.name(),
        "order": g.order(),
        "center_size": center_size,
        "nilpotent": verdict.nilpotent,
        "root_counts": roots.entries,
    });
    match &out {
        Some(path) => {
            write_json(path, &serde_json::to_value(g.to_file())?)?;
            payload["path"] = json!(path.display().to_string());
        }
        None => payload["group"] = serde_json::to_value(g.to_file())?,
    }
    let mut summary = format!(
        "{}\norder: {}\ncenter size: {center_size}\nnilpotent: {}\nroot counts:",
        g.name(),
        g.order(),
        verdict.nilpotent
    );
    for (l, r) in &roots.entries {
        let _ = write!(summary, " R_{l}={r}");
    }
    Ok(Outcome::new(true, payload, summary))
}

fn cycle_payload(c: &Cycle) -> Result<Value> {
    Ok(serde_json::to_value(c.to_file(GroupRef::Inline(c.group().clone())))?)
}

fn cycle(action: CycleAction) -> Result<Outcome> {
    match action {
        CycleAction::Construct { mode, group, cycle, p, q, r, out, budget: length_budget } => {
            let group_arc = || -> Result<Arc<FiniteGroup>> {
                Ok(Arc::new(load_group(group.as_deref().ok_or_else(|| missing("group"))?)?))
            };
            let (c, trace) = match mode {
                ConstructMode::TotallyRound => {
                    let t = totally_round_cycle(&group_arc()?)?;
                    let json = serde_json::to_value(t.to_json())?;
                    (t.result, Some(json))
                }
                ConstructMode::Pq => {
                    (pq_two_round_cycle(p.ok_or_else(|| missing("p"))?, q.ok_or_else(|| missing("q"))?)?, None)
                }
                ConstructMode::Interleave => {
                    let base = load_cycle(cycle.as_deref().ok_or_else(|| missing("cycle"))?)?;
                    (interleaved_balanced_cycle(&base)?, None)
                }
                ConstructMode::Debruijn => {
                    let r = r.ok_or_else(|| missing("r"))?;
                    let b = budget(length_budget, roundgroups::DEFAULT_LENGTH_BUDGET)?;
                    (de_bruijn_cycle(&group_arc()?, r, b)?, None)
                }
                ConstructMode::Ap => (ap_cycle(&group_arc()?)?, None),
            };
            let mut payload = json!({ "cycle": cycle_payload(&c)?, "trace": trace });
            if let Some(path) = &out {
                write_json(path, &payload["cycle"])?;
                payload["path"] = json!(path.display().to_string());
            }
            let summary = format!("{}-entry cycle over {}", c.len(), c.group().name());
            Ok(Outcome::new(true, payload, summary))
        }
        CycleAction::Check { cycle, k, budget: tuple_budget, seed, policy, strong } => {
            let c = load_cycle(&cycle)?;
            let config = CheckConfig {
                budget: budget(tuple_budget, roundgroups::DEFAULT_TUPLE_BUDGET)?,
                seed,
                policy: match policy {
                    PolicyArg::Auto => SearchPolicy::Auto,
                    PolicyArg::Exhaustive => SearchPolicy::Exhaustive,
                    PolicyArg::Sampled => SearchPolicy::Sampled,
                },
            };
            let report = match strong {
                Some(extra) => check_strongly_k_round(&c, k, extra, &config)?,
                None => check_k_round(&c, k, &config)?,
            };
            let verdict = serde_json::to_value(report.verdict)?;
            let summary = format!(
                "{}{k}-round check on {}: {}",
                if strong.is_some() { "strongly " } else { "" },
                c.group().name(),
                verdict.as_str().unwrap_or_default()
            );
            Ok(Outcome::new(report.holds(), serde_json::to_value(&report)?, summary))
        }
        CycleAction::Balance { cycle, r, variants, budget: path_budget } => {
            let c = load_cycle(&cycle)?;
            let variants: &[DVariant] = match variants {
                VariantsArg::All => &DVariant::ALL,
                VariantsArg::Default => &[DVariant::RightInverseAfter],
            };
            let report = check_dr_balanced(&c, r, variants, budget(path_budget, roundgroups::DEFAULT_TUPLE_BUDGET)?)?;
            let summary = match report.first_failing_depth {
                None => format!("D^{r}-balanced over {} paths", report.paths_checked),
                Some(d) => format!("unbalanced at depth {d}"),
            };
            Ok(Outcome::new(report.balanced, serde_json::to_value(&report)?, summary))
        }
        CycleAction::Census { cycle, width } => {
            let c = load_cycle(&cycle)?;
            let counts = c.block_census(width, budget(None, roundgroups::DEFAULT_LENGTH_BUDGET)?)?;
            let uniform = counts.windows(2).all(|w| w[0] == w[1]);
            let payload = json!({ "width": width, "counts": counts, "uniform": uniform });
            Ok(Outcome::new(true, payload, format!("{width}-block census uniform: {uniform}")))
        }
        CycleAction::Z2Search { max_len, depth_cap } => {
            let records = z2_balanced_depth_search(max_len, depth_cap)?;
            let mut summary = String::from("length  best depth");
            for rec in &records {
                let depth = rec.best_depth.map_or("-".to_string(), |d| d.to_string());
                let _ = write!(summary, "\n{:>6}  {depth}{}", rec.length, if rec.reached_cap { "+" } else { "" });
            }
            Ok(Outcome::new(true, json!({ "records": records }), summary))
        }
    }
}

fn certify(args: CertifyArgs) -> Result<Outcome> {
    if let Some(l_max) = args.recurrences {
        let rows = symmetric_root_recurrences(l_max)?;
        let holds = rows.iter().all(|r| r.product_exceeds_factorial != Some(false));
        let summary = format!("R_2 R_3 > l! for every 3 <= l <= {l_max}: {holds}");
        return Ok(Outcome::new(holds, json!({ "rows": rows }), summary));
    }
    if let Some(l) = args.dihedral {
        let cert = dihedral_certificate(l)?;
        let summary = format!("D_{l}: {} > {}", cert.product, cert.bound);
        return Ok(Outcome::new(true, json!({ "certificate": cert }), summary));
    }
    let path = args.group.expect("clap requires a group path here");
    let g = load_group(&path)?;
    let verdict = nilpotence_verdict(&g)?;
    let divisibility = frobenius_divisibility(&g)?;
    let cert = unroundness_certificate(&g, args.max_s)?;
    let consistent = cert.is_some() != verdict.nilpotent;
    let summary = match &cert {
        Some(c) => format!(
            "{}: not nilpotent; l = {:?}, R = {:?}, {} > {}",
            g.name(),
            c.ls,
            c.rs,
            c.product,
            c.bound
        ),
        None => format!("{}: nilpotent = {}, no certificate with s <= {}", g.name(), verdict.nilpotent, args.max_s),
    };
    let mut payload = json!({
        "group": g.name(),
        "order": g.order(),
        "nilpotent": verdict.nilpotent,
        "certificate": cert,
        "nilpotence": verdict,
        "divisibility": divisibility,
    });
    if !consistent {
        payload["anomaly"] = json!("certificate presence does not match the nilpotence verdict");
    }
    Ok(Outcome::new(consistent, payload, summary))
}

fn frobenius(args: FrobeniusArgs) -> Result<Outcome> {
    if let Some(set) = args.set {
        let spec = frobenius_number(&set)?;
        let mut payload = serde_json::to_value(&spec)?;
        let mut summary = format!("Phi = {}", serde_json::to_value(spec.frobenius)?);
        if let Some(gaps) = &spec.gaps {
            let _ = write!(summary, ", gaps: {gaps:?}");
        }
        if let Some(k) = args.represent {
            let rep = represent(k, &set)?;
            let _ = write!(summary, "\n{k} = {rep:?} over {:?}", spec.generators);
            payload["representation"] = json!({ "k": k, "coefficients": rep });
        }
        return Ok(Outcome::new(true, payload, summary));
    }
    if let Some(n) = args.phi_prime {
        let pp = phi_prime(n)?;
        let summary = format!("B = {:?}, Phi'({n}) = {}", pp.b, pp.phi);
        return Ok(Outcome::new(true, serde_json::to_value(&pp)?, summary));
    }
    if let Some(max_n) = args.bound_sweep {
        if max_n < 2 {
            return Err(Error::InvalidParameter("--bound-sweep needs N >= 2".into()));
        }
        let mut failures = Vec::new();
        let mut worst: Option<(u64, f64)> = None;
        for n in 2..=max_n {
            let b = bound_check(n)?;
            let ratio = b.phi_prime as f64 / b.n_squared as f64;
            if worst.is_none_or(|(_, r)| ratio > r) {
                worst = Some((n, ratio));
            }
            if !b.holds {
                failures.push(b);
            }
        }
        let all_hold = failures.is_empty();
        let (worst_n, worst_ratio) = worst.expect("range is nonempty");
        let payload = json!({
            "max_n": max_n,
            "all_hold": all_hold,
            "failures": failures,
            "largest_ratio": { "n": worst_n, "phi_prime_over_n_squared": worst_ratio },
        });
        let summary = if all_hold {
            format!("all hold for 2 <= n <= {max_n}")
        } else {
            format!("{} values of n violate the bound", failures.len())
        };
        return Ok(Outcome::new(all_hold, payload, summary));
    }
    let n = args.k_bound.expect("clap requires one query");
    let bound = k_decision_bound(n).to_str_radix(10);
    let summary = format!("({n} + 1)! = {bound}");
    Ok(Outcome::new(true, json!({ "n": n, "bound": bound }), summary))
}

fn accept(suite: SuiteArg, seed: u64, criterion: Option<u8>, inject_fault: bool) -> Result<Outcome> {
    let options = AcceptOptions {
        suite: match suite {
            SuiteArg::Fast => Suite::Fast,
            SuiteArg::Full => Suite::Full,
        },
        seed,
        inject_fault,
    };
    let outcomes = match criterion {
        Some(id) => vec![run_criterion(id, &options)?],
        None => run_all(&options),
    };
    let passed = outcomes.iter().all(|o| o.passed);
    let mut summary = String::new();
    for o in &outcomes {
        let _ = writeln!(
            summary,
            "{} {:>2} {} ({:.3}s) {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.title,
            o.elapsed.as_secs_f64(),
            o.detail
        );
    }
    summary.pop();
    let payload = json!({ "suite": options.suite, "seed": seed, "passed": passed, "criteria": outcomes });
    Ok(Outcome::new(passed, payload, summary))
}
