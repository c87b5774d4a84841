use crate::syntax::{Binary, Formula, Schema};

/// A named schema, optionally sound only on structures with at most
/// `max_worlds` worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomEntry {
    pub schema: Schema,
    pub max_worlds: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomTable {
    entries: Vec<AxiomEntry>,
}

const STANDARD: &[(&str, &str, &[&str])] = &[
    ("LUK1", "phi -> (psi -> phi)", &[]),
    ("LUK2", "(phi -> psi) -> ((psi -> chi) -> (phi -> chi))", &[]),
    ("LUK3", "((phi -> psi) -> psi) -> ((psi -> phi) -> phi)", &[]),
    ("LUK4", "(~phi -> ~psi) -> (psi -> phi)", &[]),
    ("T-Box", "[]phi -> phi", &[]),
    ("T-Dia", "phi -> <>phi", &[]),
    ("K-Box", "[](nu -> phi) -> (nu -> []phi)", &["nu"]),
    ("K-Dia", "[](phi -> nu) -> (<>phi -> nu)", &["nu"]),
    ("Box-Join", "[](phi \\/ nu) -> ([]phi \\/ nu)", &["nu"]),
    ("M5", "<>(phi * phi) == <>phi * <>phi", &[]),
    // Links between the primitive connectives, which the four schemas above
    // only constrain through -> and ~.
    ("TOP", "1", &[]),
    ("BOT", "0 -> phi", &[]),
    ("DEF-NOT-1", "~phi -> (phi -> 0)", &[]),
    ("DEF-NOT-2", "(phi -> 0) -> ~phi", &[]),
    ("DEF-OPLUS-1", "phi (+) psi -> (~phi -> psi)", &[]),
    ("DEF-OPLUS-2", "(~phi -> psi) -> phi (+) psi", &[]),
    ("DEF-STAR-1", "phi * psi -> ~(phi -> ~psi)", &[]),
    ("DEF-STAR-2", "~(phi -> ~psi) -> phi * psi", &[]),
    ("DEF-MEET-1", "phi /\\ psi -> phi * (phi -> psi)", &[]),
    ("DEF-MEET-2", "phi * (phi -> psi) -> phi /\\ psi", &[]),
    ("DEF-JOIN-1", "phi \\/ psi -> ((phi -> psi) -> psi)", &[]),
    ("DEF-JOIN-2", "((phi -> psi) -> psi) -> phi \\/ psi", &[]),
];

impl AxiomTable {
    pub fn standard() -> Self {
        let entries = STANDARD
            .iter()
            .map(|(name, text, modal)| AxiomEntry {
                schema: Schema::parse(name, text, modal).expect("built-in schema parses"),
                max_worlds: None,
            })
            .collect();
        AxiomTable { entries }
    }

    /// Adds the width schema `W_k`, sound on structures with at most `k` worlds.
    pub fn with_width(mut self, k: usize) -> Self {
        self.entries.push(AxiomEntry { schema: width_schema(k), max_worlds: Some(k) });
        self
    }

    /// Adds a schema under its own name, replacing any entry with that name.
    pub fn with_schema(mut self, schema: Schema, max_worlds: Option<usize>) -> Self {
        self.entries.retain(|e| e.schema.name != schema.name);
        self.entries.push(AxiomEntry { schema, max_worlds });
        self
    }

    pub fn get(&self, name: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.schema.name == name)
    }

    pub fn entries(&self) -> &[AxiomEntry] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.schema.name.as_str())
    }
}

/// `W_k`: `⋀_{i<j≤k+1} □(φi ∨ φj) → ⋁_{i≤k+1} □φi`, named `W{k}`.
pub fn width_schema(k: usize) -> Schema {
    assert!(k >= 1, "width starts at 1");
    let phi = |i: usize| Formula::Var(format!("phi{i}"));
    let pairs = (1..=k + 1)
        .flat_map(|i| (i + 1..=k + 1).map(move |j| (i, j)))
        .map(|(i, j)| Formula::nec(Formula::join(phi(i), phi(j))));
    let lhs = Formula::fold(Binary::Meet, pairs).expect("k >= 1 gives a pair");
    let rhs = Formula::fold(Binary::Join, (1..=k + 1).map(|i| Formula::nec(phi(i)))).expect("non-empty");
    Schema::from_pattern(&format!("W{k}"), Formula::imp(lhs, rhs), &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{match_schema, parse};

    #[test]
    fn names_are_unique() {
        let t = AxiomTable::standard().with_width(2);
        let mut names: Vec<_> = t.names().collect();
        let before = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), before);
    }

    #[test]
    fn w1_shape() {
        let w1 = width_schema(1);
        assert_eq!(w1.name, "W1");
        assert!(match_schema(&w1, &parse("[](p \\/ q) -> ([]p \\/ []q)").unwrap()).is_some());
    }

    #[test]
    fn w2_has_three_pairs() {
        let w2 = width_schema(2);
        assert_eq!(
            w2.pattern,
            parse("[](phi1 \\/ phi2) /\\ [](phi1 \\/ phi3) /\\ [](phi2 \\/ phi3) -> []phi1 \\/ []phi2 \\/ []phi3")
                .unwrap()
        );
    }

    #[test]
    fn m5_is_expanded() {
        let t = AxiomTable::standard();
        let m5 = &t.get("M5").unwrap().schema;
        assert!(matches!(m5.pattern, Formula::Meet(_, _)));
    }
}
