/// Numerical tolerances shared by every computation.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    /// Idempotent, commutation and certificate tolerance.
    pub tol: f64,
    /// Radius below which a quotient spectrum counts as `{0}`.
    pub tol_zero: f64,
    /// Eigenvalues closer than this are one spectral point.
    pub cluster_radius: f64,
    /// Minimum distance between a contour and the spectrum.
    pub clearance: f64,
    /// Starting quadrature node count.
    pub nodes: usize,
    /// Node cap for adaptive quadrature.
    pub max_nodes: usize,
    /// Successive quadrature estimates closer than this stop the doubling.
    pub contour_eps: f64,
    /// Successive partial sums closer than this stop a series.
    pub series_eps: f64,
    /// Hard cap on series terms.
    pub series_max: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: 1e-9,
            tol_zero: 1e-8,
            cluster_radius: 1e-8,
            clearance: 1e-3,
            nodes: 256,
            max_nodes: 4096,
            contour_eps: 1e-9,
            series_eps: 1e-10,
            series_max: 1000,
        }
    }
}

impl Config {
    /// Invertibility threshold relative to the element norm.
    pub fn tol_inv(&self, norm: f64) -> f64 {
        self.tol * (1.0 + norm)
    }

    /// Problems with the tolerances, outside the range the defaults were validated for.
    pub fn range_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, v: f64, lo: f64, hi: f64| {
            if !(v >= lo && v <= hi) {
                out.push(format!("{name} = {v:e} outside validated range [{lo:e}, {hi:e}]"));
            }
        };
        check("tol", self.tol, 1e-13, 1e-6);
        check("tol_zero", self.tol_zero, 1e-12, 1e-5);
        check("cluster_radius", self.cluster_radius, 1e-12, 1e-5);
        check("clearance", self.clearance, 1e-6, 1e-1);
        if self.nodes < 64 {
            out.push(format!("nodes = {} below the minimum of 64", self.nodes));
        }
        out
    }
}
