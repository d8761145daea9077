use alloc::vec::Vec;

/// Filter of `(constraint violation, barrier objective)` pairs.
///
/// A trial point dominated by any stored pair (with the relative margins)
/// is rejected; this is the cycling guard of the filter line search. No
/// stored entry dominates another: dominated pairs are pruned on insert.
#[derive(Clone, Debug, Default)]
pub struct Filter {
    entries: Vec<(f64, f64)>,
}

impl Filter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    /// A trial `(theta, phi)` is acceptable if, against every entry
    /// `(theta_j, phi_j)`, it improves one measure by its margin:
    /// `theta < (1 - gamma_theta) * theta_j` or
    /// `phi < phi_j - gamma_phi * theta_j`.
    pub fn accepts(&self, theta: f64, phi: f64, gamma_theta: f64, gamma_phi: f64) -> bool {
        self.entries
            .iter()
            .all(|&(tj, pj)| theta < (1.0 - gamma_theta) * tj || phi < pj - gamma_phi * tj)
    }

    /// Inserts `(theta, phi)`, pruning entries it dominates. A pair already
    /// covered by an existing entry is redundant and dropped, keeping the
    /// no-mutual-domination invariant.
    pub fn add(&mut self, theta: f64, phi: f64) {
        if self.entries.iter().any(|&(tj, pj)| tj <= theta && pj <= phi) {
            return;
        }
        self.entries.retain(|&(tj, pj)| !(theta <= tj && phi <= pj));
        self.entries.push((theta, phi));
    }
}
