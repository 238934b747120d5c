//! ASCII renderings of entropy Venn diagrams.
//!
//! Entries are rounded to 6 decimals; the structured output carries the
//! same values at full precision.

use qvenn::entropy::{BipartiteDiagram, TernaryDiagram};

fn cell(x: f64) -> String {
    let s = format!("{x:.6}");
    // rounding can leave a negative zero behind
    if s == "-0.000000" { "0.000000".into() } else { s }
}

/// Two overlapping lobes with S(A|B), S(A:B), S(B|A) inside.
pub fn bipartite(d: &BipartiteDiagram, label_a: &str, label_b: &str) -> String {
    let left = cell(d.s_a_given_b);
    let mid = cell(d.s_mutual);
    let right = cell(d.s_b_given_a);
    let lw = left.len().max(label_a.len());
    let mw = mid.len();
    let rw = right.len().max(label_b.len());
    let mut out = String::new();
    out.push_str(&format!(
        "   .{}.{}.{}.\n",
        "-".repeat(lw + 2),
        "-".repeat(mw + 2),
        "-".repeat(rw + 2)
    ));
    out.push_str(&format!(
        "  (  {:^lw$} |{:^mw$}| {:^rw$}  )\n",
        label_a, "", label_b
    ));
    out.push_str(&format!("  (  {left:^lw$} |{mid:^mw$}| {right:^rw$}  )\n"));
    out.push_str(&format!(
        "   '{}'{}'{}'\n",
        "-".repeat(lw + 2),
        "-".repeat(mw + 2),
        "-".repeat(rw + 2)
    ));
    out.push_str(&format!(
        "\n  S({label_a}) = {}   S({label_b}) = {}   S({label_a}{label_b}) = {}\n",
        crate::report::bits(d.s_a),
        crate::report::bits(d.s_b),
        crate::report::bits(d.s_ab),
    ));
    out
}

/// The seven ternary Venn entries laid out as a triangle.
pub fn ternary(d: &TernaryDiagram, a: &str, b: &str, c: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("                 [{a}]\n"));
    out.push_str(&format!("             ( {} )\n", cell(d.s_a_given_bc)));
    out.push_str(&format!(
        "       ( {} )   ( {} )\n",
        cell(d.s_a_b_given_c),
        cell(d.s_a_c_given_b)
    ));
    out.push_str(&format!("             ( {} )\n", cell(d.s_ternary)));
    out.push_str(&format!(
        " ( {} )  ( {} )  ( {} )\n",
        cell(d.s_b_given_ac),
        cell(d.s_b_c_given_a),
        cell(d.s_c_given_ab)
    ));
    out.push_str(&format!("   [{b}]                        [{c}]\n"));
    out.push_str(&format!(
        "\n  rows: S({a}|{b}{c}); S({a}:{b}|{c}), S({a}:{c}|{b}); S({a}:{b}:{c}); S({b}|{a}{c}), S({b}:{c}|{a}), S({c}|{a}{b})\n",
    ));
    out.push_str(&format!(
        "  S({a}) = {}   S({b}) = {}   S({c}) = {}   S({a}{b}{c}) = {}\n",
        crate::report::bits(d.s_a),
        crate::report::bits(d.s_b),
        crate::report::bits(d.s_c),
        crate::report::bits(d.s_abc),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qvenn::entropy::bipartite_diagram;
    use qvenn::states::{bell_state, BellState};

    #[test]
    fn rendered_entries_match_rounded_values() {
        let rho = bell_state(BellState::PhiPlus).to_density();
        let d = bipartite_diagram(&rho, (&["A"], &["B"])).unwrap();
        let art = bipartite(&d, "A", "B");
        assert!(art.contains("-1.000000"), "{art}");
        assert!(art.contains("2.000000"), "{art}");
        assert!(art.contains("S(AB) = 0.000000 b"), "{art}");
    }
}
