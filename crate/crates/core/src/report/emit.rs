use std::fmt::Write;

use crate::dicyclic::Branch;
use crate::diffgeo::Matrix;
use crate::symexpr::render::{latex_const, latex_gen, latex_quad, latex_rat, VarLatex};

use super::{PipelineReport, RunSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

pub fn emit(set: &RunSet, format: Format) -> String {
    match format {
        Format::Text => text(set),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(set).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Latex => latex(set),
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn text(set: &RunSet) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n={} seed={} precision={} bits samples={} tolerance=1e{}",
        set.n, set.seed, set.precision_bits, set.samples, set.tolerance_log10
    );
    for run in &set.runs {
        run_text(&mut out, run);
    }
    let _ = writeln!(out, "overall: {}", mark(set.passed()));
    out
}

fn run_text(out: &mut String, run: &PipelineReport) {
    let _ = writeln!(out, "\n== n={} branch={}: {}", run.n, run.branch, mark(run.passed));
    for s in &run.stages {
        let details: Vec<String> = s.details.iter().map(|d| format!("{}: {}", d.key, d.value)).collect();
        let _ = writeln!(out, "[{}] {:<18} {}", mark(s.passed), s.id, details.join("; "));
        if let Some(w) = &s.witness {
            let _ = writeln!(out, "       witness: {w}");
        }
    }
    let _ = writeln!(out, "numeric backstops:");
    for c in &run.numeric {
        let _ = writeln!(
            out,
            "[{}] {} (max residual {}, {} samples)",
            mark(c.passed),
            c.label,
            c.max_residual,
            c.samples
        );
    }
    if !run.flags.is_empty() {
        let _ = writeln!(out, "flags:");
    }
    for f in &run.flags {
        let _ = writeln!(out, "[FLAG] {}: computed {}, printed {}; {}", f.id, f.computed, f.printed, f.note);
    }
    if !run.objects.potential.is_empty() {
        let _ = writeln!(out, "potential (w1 = {}t1): F = {}", if run.branch == Branch::Plus { "-" } else { "" }, run.objects.potential);
    }
}

fn latex_matrix(m: &Matrix, vars: &[VarLatex]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| r.iter().map(|x| latex_rat(x, vars)).collect::<Vec<_>>().join(" & "))
        .collect();
    format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", rows.join(" \\\\ "))
}

fn latex(set: &RunSet) -> String {
    let mut out = String::new();
    out.push_str("\\documentclass{article}\n\\usepackage{amsmath}\n\\begin{document}\n");
    for run in &set.runs {
        let a = &run.artifacts;
        let sign = if run.branch == Branch::Plus { "+" } else { "-" };
        let _ = writeln!(out, "\\section*{{$n={}$, branch ${sign}$}}", run.n);
        let u = [VarLatex::plain("u_1"), VarLatex::plain("u_2")];
        if let Some(m) = &a.omega2_u {
            let _ = writeln!(out, "\\[ (\\cdot,\\cdot)_2 = {} \\]", latex_matrix(m, &u));
        }
        if let Some(m) = &a.omega1_u {
            let _ = writeln!(out, "\\[ (\\cdot,\\cdot)_1 = {} \\]", latex_matrix(m, &u));
        }
        if let Some(e) = &a.euler_u {
            let _ = writeln!(
                out,
                "\\[ E = {} \\]",
                [("u_1", 0), ("u_2", 1)]
                    .iter()
                    .map(|(v, i)| format!("\\left({}\\right)\\partial_{{{v}}}", latex_rat(e.comp(*i), &u)))
                    .collect::<Vec<_>>()
                    .join(" + ")
            );
        }
        if let Some(d) = &a.charge {
            let _ = writeln!(out, "\\[ d = {} \\]", latex_quad(d));
        }
        let t1 = match run.branch {
            Branch::Plus => VarLatex::negated("t_1"),
            Branch::Minus => VarLatex::plain("t_1"),
        };
        let t = [t1, VarLatex::plain("t_2")];
        if let Some(fc) = &a.flat {
            let _ = writeln!(out, "\\[ (\\cdot,\\cdot)_1 = {} \\]", latex_matrix(&fc.omega1, &t));
            let _ = writeln!(out, "\\[ (\\cdot,\\cdot)_2 = {} \\]", latex_matrix(&fc.omega2, &t));
        }
        if let Some(m) = &a.regularity_flat {
            let _ = writeln!(out, "\\[ R = {} \\]", latex_matrix(m, &t));
        }
        if let Some(f) = &a.potential {
            let _ = writeln!(out, "\\[ \\mathbb F_{sign} = {} \\]", latex_gen(f, &t));
        }
        if let Some(nf) = &a.normal_form {
            let z = [VarLatex::plain("z_1"), VarLatex::plain("z_2")];
            let _ = writeln!(
                out,
                "\\[ t_1 = {} z_1,\\quad t_2^2 = {} z_2^2,\\quad c = {},\\quad F(z_1,z_2) = {},\\quad k = {} \\]",
                latex_quad(&nf.a),
                latex_const(&nf.b_squared),
                latex_const(&nf.c),
                latex_gen(&nf.transformed, &z),
                latex_quad(&nf.k)
            );
        }
    }
    out.push_str("\\end{document}\n");
    out
}
