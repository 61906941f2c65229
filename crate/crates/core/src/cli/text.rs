use std::fmt::Write;

use super::AnalysisReport;
use crate::Verdict;

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn clean(v: f64) -> f64 {
    if v.abs() < 5e-10 {
        0.0
    } else {
        v
    }
}

fn complex(re: f64, im: f64) -> String {
    format!("{:>12.9} {:+.9}i", clean(re), clean(im))
}

fn verdict<W: std::fmt::Debug>(v: &Verdict<W>) -> String {
    match v {
        Verdict::Holds => "yes".to_string(),
        Verdict::Fails(w) => format!("no (at {w:?})"),
    }
}

/// Fixed-layout summary of a report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let row = |out: &mut String, key: &str, value: String| {
        let _ = writeln!(out, "{key:<24}{value}");
    };
    row(&mut out, "tool", format!("{} {}", r.tool, r.version));
    row(&mut out, "command", r.command.name().to_string());
    row(&mut out, "seed", r.seed.clone());
    row(&mut out, "tolerance", format!("{:e}", r.tolerance));
    for (role, digest) in &r.inputs {
        row(&mut out, &format!("input {role}"), digest.clone());
    }
    row(&mut out, "group order", format!("{} ({})", r.group.order, if r.group.abelian { "abelian" } else { "non-abelian" }));
    row(&mut out, "subgroup order", r.subgroup.order.to_string());
    row(&mut out, "double cosets", format!("{}  sizes {:?}", r.double_cosets.count, r.double_cosets.sizes));
    row(&mut out, "weight bi-invariant", verdict(&r.weight.k_bi_invariant));
    row(&mut out, "weight symmetric", verdict(&r.weight.symmetric));
    row(&mut out, "weight unit at e", yes_no(r.weight.unit_at_identity).to_string());
    if let Some(a) = &r.automorphism {
        row(&mut out, "automorphism involutive", yes_no(a.involutive).to_string());
        if let Some(c) = &a.condition {
            row(&mut out, "sufficient condition", yes_no(c.holds()).to_string());
        }
    }
    let g = &r.gelfand;
    let verdict_line = match &g.witness {
        None => yes_no(g.gelfand).to_string(),
        Some(w) => format!("no (delta_{} and delta_{} differ at {})", w.i, w.j, w.x),
    };
    row(&mut out, "weighted gelfand", verdict_line);
    if let Some(u) = g.unimodularity {
        row(&mut out, "unimodularity identity", yes_no(u).to_string());
    }
    if let Some(set) = &r.spherical {
        row(&mut out, "spherical functions", set.len().to_string());
        for (s, e) in set.entries().iter().enumerate() {
            let values: Vec<String> = e.function.coset_values().iter().map(|v| complex(v.re, v.im)).collect();
            let _ = writeln!(out, "  phi_{s:<3} {}", values.join("  "));
        }
    }
    if let Some(f) = &r.fourier {
        let cond = f.condition.map_or("inf".to_string(), |c| format!("{c:.6e}"));
        row(&mut out, "fourier rank", format!("{}  condition {cond}", f.rank));
        for (i, rowv) in f.table.iter().enumerate() {
            let values: Vec<String> = rowv.iter().map(|v| complex(v[0], v[1])).collect();
            let _ = writeln!(out, "  D_{i:<5} {}", values.join("  "));
        }
    }
    if let Some(m) = &r.multipliers {
        for op in &m.operators {
            let status = match op.witness {
                None => "multiplier".to_string(),
                Some((i, j)) => format!("not a multiplier (at delta_{i}, delta_{j})"),
            };
            row(&mut out, &format!("operator {}", op.index), status);
            if let Some(sym) = &op.symbol {
                let values: Vec<String> = sym.iter().map(|v| complex(v[0], v[1])).collect();
                let _ = writeln!(out, "  symbol   {}", values.join("  "));
            }
            if let Some(res) = op.kernel_transform_residual {
                let _ = writeln!(out, "  |symbol - transform of kernel| {res:.3e}");
            }
        }
        for c in &m.commutation {
            row(&mut out, &format!("commutation {} {}", c.a, c.b), format!("{:.3e}", c.residual));
        }
    }
    if let Some(t) = &r.timings_ms {
        for (stage, ms) in t {
            row(&mut out, &format!("time {stage}"), format!("{ms:.3} ms"));
        }
    }
    for n in &r.notes {
        row(&mut out, "note", n.clone());
    }
    out
}
