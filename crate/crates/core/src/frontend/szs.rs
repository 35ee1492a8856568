//! SZS status lines and proof printing.

use std::fmt::Write;

use crate::saturation::{Proof, SaturationResult};
use crate::term::Signature;

pub fn status_name(r: &SaturationResult) -> &'static str {
    match r {
        SaturationResult::Unsatisfiable(_) => "Unsatisfiable",
        SaturationResult::Saturated => "Satisfiable",
        SaturationResult::ResourceOut => "ResourceOut",
    }
}

/// One line per proof step: `id. <clause> [<rule> <parent ids>]`.
pub fn format_proof(proof: &Proof, sig: &Signature) -> String {
    let mut out = String::new();
    for c in &proof.steps {
        let inf = c.inference();
        let _ = write!(out, "{}. {} [{}", c.id(), c.display(sig), inf.rule);
        for p in &inf.parents {
            let _ = write!(out, " {p}");
        }
        out.push_str("]\n");
    }
    out
}

/// The status line and, for a refutation with `proof` set, the derivation.
pub fn emit_result(r: &SaturationResult, sig: &Signature, problem: &str, proof: bool) -> String {
    let mut out = format!("% SZS status {} for {}\n", status_name(r), problem);
    if let (SaturationResult::Unsatisfiable(p), true) = (r, proof) {
        let _ = writeln!(out, "% SZS output start CNFRefutation for {problem}");
        out.push_str(&format_proof(p, sig));
        let _ = writeln!(out, "% SZS output end CNFRefutation for {problem}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::tptp::parse_problem;
    use crate::saturation::{saturate, ProverConfig};

    #[test]
    fn status_lines() {
        let sig = Signature::new();
        assert!(emit_result(&SaturationResult::Saturated, &sig, "t", true)
            .starts_with("% SZS status Satisfiable"));
        assert_eq!(
            emit_result(&SaturationResult::ResourceOut, &sig, "t", true),
            "% SZS status ResourceOut for t\n"
        );
    }

    #[test]
    fn refutation_ends_in_false() {
        let p = parse_problem(
            "cnf(a, axiom, p(c)).\ncnf(b, negated_conjecture, ~p(c)).",
            "t",
            None,
        )
        .unwrap();
        let r = saturate(p.clauses(), ProverConfig::default());
        let text = emit_result(&r, &p.signature, "t", true);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "% SZS status Unsatisfiable for t");
        assert_eq!(
            lines
                .iter()
                .filter(|l| l.starts_with("% SZS status"))
                .count(),
            1
        );
        let last_step = lines[lines.len() - 2];
        assert!(last_step.contains(". $false [resolution "), "{last_step}");
        assert!(lines[2].ends_with("p(c) [input]"), "{}", lines[2]);
    }
}
