//! Assignments encoded into node labels `⟨a, M⟩`, written `a|{x,X}`.

use super::{is_set_var, Assignment, MsoError};
use crate::alphabet::Alphabet;
use crate::graph::{LabeledGraph, NodeSubset};

/// `a|{v1,v2}` with the variables in the given order.
pub fn pair_label<S: AsRef<str>>(a: &str, vars: &[S]) -> String {
    let names: Vec<&str> = vars.iter().map(AsRef::as_ref).collect();
    format!("{a}|{{{}}}", names.join(","))
}

/// Inverse of [`pair_label`].
pub fn split_pair_label(label: &str) -> Result<(String, Vec<String>), MsoError> {
    let bad = || MsoError::PairLabel(label.to_string());
    let cut = label.rfind("|{").ok_or_else(bad)?;
    let inner = label[cut + 2..].strip_suffix('}').ok_or_else(bad)?;
    let vars = if inner.is_empty() { Vec::new() } else { inner.split(',').map(str::to_string).collect() };
    Ok((label[..cut].to_string(), vars))
}

/// `Σ × 2^vars`; `vars` must be sorted.
pub fn pair_alphabet(sigma: &Alphabet, vars: &[String]) -> Alphabet {
    debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
    let mut symbols = Vec::with_capacity(sigma.len() << vars.len());
    for a in sigma.iter() {
        for mask in 0u32..1 << vars.len() {
            let m: Vec<&String> = vars.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).collect();
            symbols.push(pair_label(a, &m));
        }
    }
    Alphabet::new(symbols).expect("distinct pair labels")
}

/// `G_{λ×α⁻¹}`: node `v` gets `⟨λ(v), α⁻¹(v) ∩ scope⟩`.
pub fn encode_assignment(g: &LabeledGraph, alpha: &Assignment, scope: &[String]) -> Result<LabeledGraph, MsoError> {
    let mut scope: Vec<String> = scope.to_vec();
    scope.sort();
    scope.dedup();
    for x in &scope {
        let known = if is_set_var(x) { alpha.sets.contains_key(x) } else { alpha.nodes.contains_key(x) };
        if !known {
            return Err(MsoError::Unassigned(x.clone()));
        }
    }
    let sigma = pair_alphabet(g.sigma(), &scope);
    let out = g.relabel(sigma, |v, a| {
        let m: Vec<&String> = scope
            .iter()
            .filter(|x| if is_set_var(x) { alpha.sets[*x].contains(v) } else { alpha.nodes[*x] == v })
            .collect();
        pair_label(a, &m)
    })?;
    Ok(out)
}

/// Splits pair labels back into the plain graph over `sigma` and the
/// assignment they carry. Set variables absent from every label decode to
/// the empty set only if listed in `set_vars`.
pub fn decode_assignment(
    g: &LabeledGraph,
    sigma: &Alphabet,
    set_vars: &[String],
) -> Result<(LabeledGraph, Assignment), MsoError> {
    let mut alpha = Assignment::new();
    for x in set_vars {
        alpha.sets.insert(x.clone(), NodeSubset::empty());
    }
    let mut members: std::collections::BTreeMap<String, Vec<usize>> = Default::default();
    for v in g.nodes() {
        let (_, vars) = split_pair_label(g.label_name(v))?;
        for x in vars {
            if is_set_var(&x) {
                members.entry(x).or_default().push(v);
            } else if alpha.nodes.insert(x.clone(), v).is_some() {
                return Err(MsoError::PairLabel(format!("node variable `{x}` carried by several nodes")));
            }
        }
    }
    for (x, vs) in members {
        alpha.sets.insert(x, NodeSubset::new(vs));
    }
    let plain = g.relabel(sigma.clone(), |_, label| split_pair_label(label).map(|(a, _)| a).unwrap_or_default())?;
    Ok((plain, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn empty_scope_keeps_structure() {
        let g = LabeledGraph::simple(ab(), &["a", "b"], &[(0, 1)]).unwrap();
        let e = encode_assignment(&g, &Assignment::new(), &[]).unwrap();
        assert_eq!(e.label_name(0), "a|{}");
        assert_eq!(e.label_name(1), "b|{}");
        assert!(e.has_edge(0, 0, 1));
    }

    #[test]
    fn labels_carry_variables() {
        let g = LabeledGraph::simple(ab(), &["a", "b", "a"], &[]).unwrap();
        let alpha = Assignment::new().with_node("x", 0).with_set("X", NodeSubset::new([0, 1]));
        let e = encode_assignment(&g, &alpha, &["x".into(), "X".into()]).unwrap();
        assert_eq!(e.label_name(0), "a|{X,x}");
        assert_eq!(e.label_name(1), "b|{X}");
        assert_eq!(e.label_name(2), "a|{}");
        let (plain, back) = decode_assignment(&e, &ab(), &["X".into()]).unwrap();
        assert_eq!(back, alpha);
        assert_eq!(plain, g);
    }

    #[test]
    fn split_rejects_plain_labels() {
        assert!(split_pair_label("a").is_err());
        assert_eq!(split_pair_label("a|{}").unwrap(), ("a".to_string(), vec![]));
    }
}
