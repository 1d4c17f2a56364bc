/// Sampled observables of one integration run.
///
/// All per-sample vectors share the length of `times`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Mean occupation `Σ i ρ_ii`.
    pub n_bar: Vec<f64>,
    /// Diagonal populations at each sample.
    pub populations: Vec<Vec<f64>>,
    pub trace: Vec<f64>,
    /// `Tr ρ²`.
    pub purity: Vec<f64>,
    /// Largest `|ρ_mn - conj(ρ_nm)|` before Hermitization.
    pub hermiticity_error: Vec<f64>,
    /// Largest off-diagonal magnitude `|ρ_mn|`, `m != n`.
    pub max_coherence: Vec<f64>,
    /// Whether either dissipator rate was negative at the sample time.
    pub negative_rate: Vec<bool>,
    /// `(time, smallest eigenvalue)` at positivity checkpoints.
    pub min_eigenvalues: Vec<(f64, f64)>,
    /// First sample time at which `(n̄_S - n̄_R) γ t > n̄_R`, the
    /// perturbative guideline for the feedback correction.
    pub guideline_exceeded_at: Option<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn any_negative_rate(&self) -> bool {
        self.negative_rate.iter().any(|&f| f)
    }

    pub(crate) fn check_guideline(&mut self, t: f64, n_bar_s: f64, n_bar_r: f64, gamma: f64) {
        if self.guideline_exceeded_at.is_none() && (n_bar_s - n_bar_r) * gamma * t > n_bar_r {
            self.guideline_exceeded_at = Some(t);
        }
    }
}
