//! One function per subcommand: runs the library call(s), serializes the
//! outcome into the report payload. Big integers are rendered as decimal
//! strings; counts and small indices stay native JSON numbers.

use serde_json::{json, Value};

use recurprimes::arith::{FactorBudget, Factorizer};
use recurprimes::artinset::{
    artin_count_rational_window, artin_count_window, gpf_window, ArtinWindow,
};
use recurprimes::constructions::{
    hyperelliptic_points, hyperelliptic_points_rational, thue_family, verify_rational_twists,
    verify_thue, verify_twists,
};
use recurprimes::disjunction::{
    case_breakdown, count_t_window, disjunction_window, reference_curve, DisjunctionWindow,
};
use recurprimes::lucasdiv::{
    lucas_valuation, primitive_divisors, rank_of_apparition, rank_within_growth_bounds,
    LucasParams,
};
use recurprimes::omega::{
    conditional_floor, growth_upper_bound, omega_product, prime_count_floor_n_over_log_n,
};
use recurprimes::quadring::closed_form_constants;
use recurprimes::recurrence::{
    dominant_root_abs, growth_gaps, term_range, Degeneracy, RecurrenceParams,
};
use recurprimes::Result;

use crate::report::{CsvTable, Report};
use crate::shard;

fn budget_json(b: &FactorBudget) -> Value {
    json!({
        "trial_bound": b.trial_bound,
        "rho_iterations": b.rho_iterations,
        "primality_rounds": b.primality_rounds,
    })
}

fn classification_text(params: &RecurrenceParams) -> String {
    match params.classification() {
        Degeneracy::NonDegenerate => "non-degenerate".into(),
        Degeneracy::Degenerate(reason) => format!("degenerate: {reason}"),
    }
}

// ---------------------------------------------------------------------------

pub fn terms(
    r: i64,
    s: i64,
    u0: i64,
    u1: i64,
    lo: u64,
    hi: u64,
    with_gaps: bool,
) -> Result<Report> {
    let params = RecurrenceParams::new(r, s, u0, u1)?;
    let values = term_range(&params, lo, hi)?;
    let root = dominant_root_abs(&params);
    let cf = closed_form_constants(&params);
    let mut results = json!({
        "classification": classification_text(&params),
        "discriminant": params.discriminant().to_string(),
        "dominant_root_abs": root.value,
        "root_at_least_sqrt2": root.at_least_sqrt2(),
        "closed_form": {
            "alpha": cf.alpha.to_string(),
            "beta": cf.beta.to_string(),
            "a": cf.a.to_string(),
            "b": cf.b.to_string(),
        },
        "terms": values
            .iter()
            .enumerate()
            .map(|(i, v)| json!({"n": lo + i as u64, "value": v.to_string()}))
            .collect::<Vec<_>>(),
    });
    if with_gaps {
        let g = growth_gaps(&params, lo, hi)?;
        results["growth_gaps"] = json!({
            "alpha_abs": g.alpha_abs,
            "gaps": g.gaps.iter().map(|&(n, gap)| json!([n, gap])).collect::<Vec<_>>(),
            "fitted_c0": g.fitted_c0,
        });
    }
    let mut csv = CsvTable::new(vec!["n", "value"]);
    for (i, v) in values.iter().enumerate() {
        csv.push_row(vec![(lo + i as u64).to_string(), v.to_string()]);
    }
    let mut rep = Report::new(
        json!({"r": r, "s": s, "u0": u0, "u1": u1, "n_lo": lo, "n_hi": hi}),
        results,
    );
    rep.csv = csv;
    Ok(rep)
}

pub fn omega(
    r: i64,
    s: i64,
    u0: i64,
    u1: i64,
    n: u64,
    eps: f64,
    budget: &FactorBudget,
) -> Result<Report> {
    let params = RecurrenceParams::new(r, s, u0, u1)?;
    let rep = omega_product(&params, n, budget)?;
    let results = json!({
        "n": n,
        "omega_certain": rep.omega_certified(),
        "omega_lower": rep.omega_lower(),
        "omega_upper": rep.omega_upper(),
        "fully_resolved": rep.is_fully_resolved(),
        "primes": rep.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "unresolved": rep
            .unresolved
            .iter()
            .map(|(idx, c)| json!({"n": idx, "cofactor": c.to_string()}))
            .collect::<Vec<_>>(),
        "zero_terms": rep.zero_terms,
    });
    let linear_floor = conditional_floor(n, eps);
    let growth_upper = growth_upper_bound(&params, n)?;
    let bounds = json!({
        "linear_floor": linear_floor,
        "linear_floor_epsilon": eps,
        "growth_upper": growth_upper,
        "n_over_log_n": prime_count_floor_n_over_log_n(n).ok(),
    });
    let mut warnings = Vec::new();
    if !rep.is_fully_resolved() {
        warnings.push(format!(
            "{} cofactor(s) unresolved within budget; the certified count is a lower bound",
            rep.unresolved.len()
        ));
    }
    if (rep.omega_certified() as f64) <= linear_floor {
        warnings.push(format!(
            "certified count {} does not exceed the linear floor {linear_floor:.3} (finding)",
            rep.omega_certified()
        ));
    }
    if rep.omega_upper() > growth_upper {
        warnings.push(format!(
            "interval upper end {} exceeds the growth bound {growth_upper} (finding)",
            rep.omega_upper()
        ));
    }
    let mut csv = CsvTable::new(vec!["prime"]);
    for p in &rep.primes {
        csv.push_row(vec![p.to_string()]);
    }
    let mut out = Report::new(
        json!({
            "r": r, "s": s, "u0": u0, "u1": u1, "n": n,
            "epsilon": eps, "budget": budget_json(budget),
        }),
        results,
    );
    out.bounds = bounds;
    out.warnings = warnings;
    out.csv = csv;
    Ok(out)
}

pub fn rank(r: i64, s: i64, p: u64) -> Result<Report> {
    let lp = LucasParams::new(r, s)?;
    let rec = rank_of_apparition(&lp, p)?;
    let within = rank_within_growth_bounds(&lp, &rec);
    let results = json!({
        "p": p,
        "rank": rec.rank,
        "valuation_at_rank": rec.valuation_at_rank,
        "within_growth_bounds": within,
    });
    let mut csv = CsvTable::new(vec!["key", "value"]);
    csv.push_row(vec!["p".to_string(), p.to_string()]);
    csv.push_row(vec!["rank".to_string(), rec.rank.to_string()]);
    csv.push_row(vec!["valuation_at_rank".to_string(), rec.valuation_at_rank.to_string()]);
    let mut rep = Report::new(json!({"r": r, "s": s, "p": p}), results);
    rep.csv = csv;
    Ok(rep)
}

pub fn valuation(r: i64, s: i64, p: u64, n: u64) -> Result<Report> {
    let lp = LucasParams::new(r, s)?;
    let v = lucas_valuation(&lp, p, n)?;
    let results = json!({"p": p, "n": n, "valuation": v});
    let mut csv = CsvTable::new(vec!["key", "value"]);
    csv.push_row(vec!["valuation".to_string(), v.to_string()]);
    let mut rep = Report::new(json!({"r": r, "s": s, "p": p, "n": n}), results);
    rep.csv = csv;
    Ok(rep)
}

pub fn primdiv(r: i64, s: i64, n: u64, budget: &FactorBudget) -> Result<Report> {
    let lp = LucasParams::new(r, s)?;
    let fz = Factorizer::new(budget.clone())?;
    let pd = primitive_divisors(&lp, n, &fz)?;
    let results = json!({
        "n": n,
        "term": pd.term.to_string(),
        "primitive_primes": pd.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "unresolved_cofactor": pd.unresolved.as_ref().map(|c| c.to_string()),
    });
    let mut warnings = Vec::new();
    if pd.unresolved.is_some() {
        warnings.push(
            "an unresolved cofactor may hide further primitive divisors".to_string(),
        );
    }
    let mut csv = CsvTable::new(vec!["prime"]);
    for p in &pd.primes {
        csv.push_row(vec![p.to_string()]);
    }
    let mut rep = Report::new(
        json!({"r": r, "s": s, "n": n, "budget": budget_json(budget)}),
        results,
    );
    rep.warnings = warnings;
    rep.csv = csv;
    Ok(rep)
}

// ---------------------------------------------------------------------------
// prime-window subcommands (sharded)

fn merge_artin_windows(windows: Vec<Result<ArtinWindow>>) -> Result<Option<ArtinWindow>> {
    let mut merged: Option<ArtinWindow> = None;
    for w in windows {
        let w = w?;
        merged = Some(match merged {
            None => w,
            Some(acc) => ArtinWindow::merge(&acc, &w)?,
        });
    }
    Ok(merged)
}

fn prime_list_json(primes: &Option<Vec<u64>>) -> Value {
    match primes {
        Some(list) => json!(list),
        None => Value::Null,
    }
}

fn prime_csv(primes: &Option<Vec<u64>>) -> CsvTable {
    let mut csv = CsvTable::new(vec!["prime"]);
    if let Some(list) = primes {
        for p in list {
            csv.push_row(vec![p.to_string()]);
        }
    }
    csv
}

pub fn artin(a: i64, b: i64, x: u64, list: bool, jobs: usize) -> Result<Report> {
    // validate inputs once before fanning out
    artin_count_window(a, b, 2, 2, false)?;
    let hi = x.saturating_add(1);
    let windows =
        shard::parallel_windows(jobs, 2, hi, |lo, hi| artin_count_window(a, b, lo, hi, list));
    let merged = merge_artin_windows(windows)?
        .unwrap_or(ArtinWindow { lo: 2, hi, count: 0, excluded: 0, primes: list.then(Vec::new) });
    let ratio = (x >= 2).then(|| merged.count as f64 / (x as f64).ln());
    let results = json!({
        "x": x,
        "count": merged.count,
        "excluded": merged.excluded,
        "log_x_ratio": ratio,
        "primes": prime_list_json(&merged.primes),
    });
    let mut rep = Report::new(json!({"a": a, "b": b, "x": x}), results);
    rep.csv = prime_csv(&merged.primes);
    Ok(rep)
}

pub fn artin_rational(
    a1: i64,
    a2: i64,
    b1: i64,
    b2: i64,
    x: u64,
    list: bool,
    jobs: usize,
) -> Result<Report> {
    artin_count_rational_window(a1, a2, b1, b2, 2, 2, false)?;
    let hi = x.saturating_add(1);
    let windows = shard::parallel_windows(jobs, 2, hi, |lo, hi| {
        artin_count_rational_window(a1, a2, b1, b2, lo, hi, list)
    });
    let merged = merge_artin_windows(windows)?
        .unwrap_or(ArtinWindow { lo: 2, hi, count: 0, excluded: 0, primes: list.then(Vec::new) });
    let ratio = (x >= 2).then(|| merged.count as f64 / (x as f64).ln());
    let results = json!({
        "x": x,
        "count": merged.count,
        "excluded": merged.excluded,
        "log_x_ratio": ratio,
        "primes": prime_list_json(&merged.primes),
    });
    let mut rep = Report::new(
        json!({"a1": a1, "a2": a2, "b1": b1, "b2": b2, "x": x}),
        results,
    );
    rep.csv = prime_csv(&merged.primes);
    Ok(rep)
}

pub fn gpf(a: i64, b: i64, n: u64, y: u64, budget: &FactorBudget) -> Result<Report> {
    let rep = gpf_window(a, b, n, y, budget)?;
    let results = json!({
        "entries": rep
            .entries
            .iter()
            .map(|e| json!({
                "n": e.n,
                "value": e.value.to_string(),
                "greatest_prime_factor": e.gpf.value.to_string(),
                "convention": e.gpf.convention,
                "resolved": e.gpf.resolved,
                "cofactor": e.gpf.cofactor.as_ref().map(|c| c.to_string()),
                "curve": e.curve,
            }))
            .collect::<Vec<_>>(),
        "distinct_resolved": rep.distinct_resolved,
        "collisions": rep
            .collisions
            .iter()
            .map(|(g, idx)| json!({"greatest_prime_factor": g.to_string(), "indices": idx}))
            .collect::<Vec<_>>(),
        "zero_indices": rep.zero_indices,
        "unresolved": rep.unresolved,
    });
    let mut warnings = Vec::new();
    if rep.unresolved > 0 {
        warnings.push(format!(
            "{} value(s) not fully factored; their greatest prime factors are lower bounds",
            rep.unresolved
        ));
    }
    let mut csv = CsvTable::new(vec!["n", "value", "greatest_prime_factor", "resolved", "curve"]);
    for e in &rep.entries {
        csv.push_row(vec![
            e.n.to_string(),
            e.value.to_string(),
            e.gpf.value.to_string(),
            e.gpf.resolved.to_string(),
            e.curve.map_or(String::new(), |c| c.to_string()),
        ]);
    }
    let mut out = Report::new(
        json!({"a": a, "b": b, "n": n, "y": y, "budget": budget_json(budget)}),
        results,
    );
    out.warnings = warnings;
    out.csv = csv;
    Ok(out)
}

pub fn disjunction(a: i64, b: i64, x: u64, list: bool, jobs: usize) -> Result<Report> {
    count_t_window(a, b, 2, 2, false)?;
    let hi = x.saturating_add(1);

    let t_windows =
        shard::parallel_windows(jobs, 2, hi, |lo, hi| count_t_window(a, b, lo, hi, list));
    let t = merge_artin_windows(t_windows)?
        .unwrap_or(ArtinWindow { lo: 2, hi, count: 0, excluded: 0, primes: list.then(Vec::new) });

    let d_windows =
        shard::parallel_windows(jobs, 2, hi, |lo, hi| disjunction_window(a, b, lo, hi, list));
    let mut merged: Option<DisjunctionWindow> = None;
    for w in d_windows {
        let w = w?;
        merged = Some(match merged {
            None => w,
            Some(acc) => DisjunctionWindow::merge(&acc, &w)?,
        });
    }
    let d = merged.unwrap_or(DisjunctionWindow {
        lo: 2,
        hi,
        count: 0,
        member_only: 0,
        primitive_only: 0,
        both: 0,
        excluded: 0,
        primes: list.then(Vec::new),
        containment_verified: true,
    });

    let cases = case_breakdown(a, b, x)?;

    let results = json!({
        "x": x,
        "t": {
            "count": t.count,
            "excluded": t.excluded,
            "primes": prime_list_json(&t.primes),
        },
        "disjunction": {
            "count": d.count,
            "member_only": d.member_only,
            "primitive_only": d.primitive_only,
            "both": d.both,
            "excluded": d.excluded,
            "containment_verified": d.containment_verified,
            "primes": prime_list_json(&d.primes),
        },
        "cases": {
            "t_count": cases.t_count,
            "case1": cases.case1,
            "case21": cases.case21,
            "case22": cases.case22,
            "case23": cases.case23,
            "case2_tied": cases.case2_tied,
            "order_two": cases.order_two,
            "case23_fraction": cases.case23_fraction,
            "equal_order_2q2_confirmed": cases.equal_order_2q2_confirmed,
        },
    });
    let bounds = json!({"reference_curve_x_over_log_sq": reference_curve(x)});
    let mut rep = Report::new(json!({"a": a, "b": b, "x": x}), results);
    rep.bounds = bounds;
    rep.csv = prime_csv(&d.primes);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// construction subcommands

pub fn thue(a: i64, b: i64, n: u64, budget: &FactorBudget) -> Result<Report> {
    let rep = thue_family(a, b, n, budget)?;
    let verified = verify_thue(&rep)?;
    let results = json!({
        "usable": rep.usable,
        "skipped_unfactored": rep.skipped_unfactored,
        "skipped_zero": rep.skipped_zero,
        "ambient_primes": rep.ambient_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "class_count": rep.classes.len(),
        "class_bound": rep.class_bound.to_string(),
        "max_class_size": rep.max_class_size,
        "pigeonhole_floor": rep.pigeonhole_floor,
        "pigeonhole_ok": rep.pigeonhole_ok,
        "reference": rep.reference_formula,
        "verified_solutions": verified,
        "classes": rep
            .classes
            .iter()
            .map(|c| json!({
                "delta": c.key.delta,
                "negative": c.key.negative,
                "eps": c.key.eps.iter()
                    .map(|(p, r)| json!({"prime": p.to_string(), "residue": r}))
                    .collect::<Vec<_>>(),
                "e": c.e.to_string(),
                "solutions": c.solutions.iter()
                    .map(|s| json!({"n": s.n, "x": s.x.to_string(), "y": s.y.to_string()}))
                    .collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
    });
    let mut warnings = Vec::new();
    if !rep.skipped_unfactored.is_empty() {
        warnings.push(format!(
            "{} index(es) skipped: value not fully factored within budget",
            rep.skipped_unfactored.len()
        ));
    }
    let mut csv = CsvTable::new(vec!["delta", "negative", "e", "solutions"]);
    for c in &rep.classes {
        csv.push_row(vec![
            c.key.delta.to_string(),
            c.key.negative.to_string(),
            c.e.to_string(),
            c.solutions.len().to_string(),
        ]);
    }
    let mut out = Report::new(
        json!({"a": a, "b": b, "n": n, "budget": budget_json(budget)}),
        results,
    );
    out.warnings = warnings;
    out.csv = csv;
    Ok(out)
}

pub fn curve(a: i64, b: i64, n: u64, budget: &FactorBudget) -> Result<Report> {
    let rep = hyperelliptic_points(a, b, n, budget)?;
    let verified = verify_twists(&rep)?;
    let results = json!({
        "points": rep
            .points
            .iter()
            .map(|p| json!({
                "n": p.n,
                "d": p.d.to_string(),
                "x": p.x.to_string(),
                "y": p.y.to_string(),
                "height": p.height.to_string(),
            }))
            .collect::<Vec<_>>(),
        "groups": rep
            .groups
            .iter()
            .map(|(d, idx)| json!({"d": d.to_string(), "indices": idx}))
            .collect::<Vec<_>>(),
        "usable": rep.usable,
        "skipped_unfactored": rep.skipped_unfactored,
        "skipped_zero": rep.skipped_zero,
        "negative_count": rep.negative_count,
        "ambient_primes": rep.ambient_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "max_group_size": rep.max_group_size,
        "pigeonhole_floor": rep.pigeonhole_floor,
        "pigeonhole_ok": rep.pigeonhole_ok,
        "height_bound": rep.height_bound.to_string(),
        "heights_within_bound": rep.heights_within_bound,
        "reference": rep.reference_formula,
        "loglog_height_bound": rep.loglog_height_bound,
        "verified_points": verified,
    });
    let mut warnings = Vec::new();
    if !rep.skipped_unfactored.is_empty() {
        warnings.push(format!(
            "{} index(es) skipped: value not fully factored within budget",
            rep.skipped_unfactored.len()
        ));
    }
    if rep.negative_count > 0 {
        warnings.push(format!(
            "{} point(s) built from negative values; their d is negative",
            rep.negative_count
        ));
    }
    let mut csv = CsvTable::new(vec!["n", "d", "x", "y", "height"]);
    for p in &rep.points {
        csv.push_row(vec![
            p.n.to_string(),
            p.d.to_string(),
            p.x.to_string(),
            p.y.to_string(),
            p.height.to_string(),
        ]);
    }
    let mut out = Report::new(
        json!({"a": a, "b": b, "n": n, "budget": budget_json(budget)}),
        results,
    );
    out.warnings = warnings;
    out.csv = csv;
    Ok(out)
}

pub fn curve_rational(
    a1: i64,
    a2: i64,
    b1: i64,
    b2: i64,
    n: u64,
    budget: &FactorBudget,
) -> Result<Report> {
    let rep = hyperelliptic_points_rational(a1, a2, b1, b2, n, budget)?;
    let verified = verify_rational_twists(&rep)?;
    let results = json!({
        "points": rep
            .points
            .iter()
            .map(|p| json!({
                "n": p.n,
                "d": p.d.to_string(),
                "x": p.x.to_string(),
                "y": p.y.to_string(),
                "height": p.height.to_string(),
            }))
            .collect::<Vec<_>>(),
        "groups": rep
            .groups
            .iter()
            .map(|(d, idx)| json!({"d": d.to_string(), "indices": idx}))
            .collect::<Vec<_>>(),
        "usable": rep.usable,
        "skipped_unfactored": rep.skipped_unfactored,
        "skipped_zero": rep.skipped_zero,
        "negative_count": rep.negative_count,
        "ambient_primes": rep.ambient_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "max_group_size": rep.max_group_size,
        "pigeonhole_floor": rep.pigeonhole_floor,
        "pigeonhole_ok": rep.pigeonhole_ok,
        "height_bound": rep.height_bound.to_string(),
        "heights_within_bound": rep.heights_within_bound,
        "verified_points": verified,
    });
    let mut warnings = Vec::new();
    if !rep.skipped_unfactored.is_empty() {
        warnings.push(format!(
            "{} index(es) skipped: value not fully factored within budget",
            rep.skipped_unfactored.len()
        ));
    }
    let mut csv = CsvTable::new(vec!["n", "d", "x", "y", "height"]);
    for p in &rep.points {
        csv.push_row(vec![
            p.n.to_string(),
            p.d.to_string(),
            p.x.to_string(),
            p.y.to_string(),
            p.height.to_string(),
        ]);
    }
    let mut out = Report::new(
        json!({"a1": a1, "a2": a2, "b1": b1, "b2": b2, "n": n, "budget": budget_json(budget)}),
        results,
    );
    out.warnings = warnings;
    out.csv = csv;
    Ok(out)
}
