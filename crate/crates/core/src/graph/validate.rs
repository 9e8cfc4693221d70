use super::FundamentalGraph;
use crate::forms::{basic_cycles, flux, spanning_tree, OneForm};
use crate::lattice;

/// Structural checks on a fundamental graph. Failures are carried in the
/// report rather than returned as errors.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub connected: bool,
    pub betti: usize,
    pub flux_rank: usize,
    pub flux_surjective: bool,
    pub degree_max: usize,
    pub messages: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.connected && self.flux_surjective
    }
}

pub fn validate(g: &FundamentalGraph) -> ValidationReport {
    let mut messages = Vec::new();
    let connected = g.is_connected();
    let degree_max = g.max_degree();
    let betti = g.betti();

    let (flux_rank, flux_surjective) = match spanning_tree(g) {
        Ok(tree) => {
            let tau = OneForm::index_form(g);
            let rows: Vec<Vec<i64>> = basic_cycles(g, &tree)
                .iter()
                .map(|c| {
                    flux(g, &tau, c)
                        .expect("basic cycles are chained")
                        .entries()
                        .to_vec()
                })
                .collect();
            let inv = lattice::smith_invariants(&rows);
            let surjective = inv.len() == g.dim() && inv.iter().all(|&x| x == 1);
            if !surjective {
                let factors: Vec<String> = inv.iter().map(|x| x.to_string()).collect();
                messages.push(format!(
                    "flux image is not Z^{}: invariant factors [{}]",
                    g.dim(),
                    factors.join(", ")
                ));
            }
            (inv.len(), surjective)
        }
        Err(_) => {
            messages.push("graph is disconnected".to_string());
            (0, false)
        }
    };
    if connected && flux_surjective && betti < g.dim() {
        // unreachable for surjective fluxes; kept as a consistency check
        messages.push(format!("betti number {betti} below dimension {}", g.dim()));
    }

    ValidationReport {
        connected,
        betti,
        flux_rank,
        flux_surjective,
        degree_max,
        messages,
    }
}
