use crate::error::Result;
use crate::symcore::graph::VertexGraph;
use crate::symcore::subshift::Subshift;

/// Relative width of the Collatz-Wielandt bracket at which iteration stops.
pub const SPECTRAL_TOL: f64 = 1e-13;
const MAX_ITERS: usize = 1_000_000;

/// Perron data of one irreducible component: eigenvalue and left/right
/// eigenvectors (indexed by graph vertex, zero outside the component).
#[derive(Debug, Clone)]
pub struct Perron {
    pub lambda: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    pub component: Vec<usize>,
}

/// Power iteration on `A + I` restricted to `comp`, which is primitive even
/// when `A` is periodic. Returns the eigenvalue of `A` and its eigenvector.
fn power(g: &VertexGraph, comp: &[usize], transpose: bool) -> (f64, Vec<f64>) {
    let n = g.len();
    let mut inside = vec![false; n];
    for &v in comp {
        inside[v] = true;
    }
    let mut x = vec![0.0; n];
    for &v in comp {
        x[v] = 1.0;
    }
    let mut lambda = 0.0;
    for _ in 0..MAX_ITERS {
        let mut y = x.clone();
        for &v in comp {
            for &(_, w) in g.successors(v) {
                if !inside[w] {
                    continue;
                }
                if transpose {
                    y[w] += x[v];
                } else {
                    y[v] += x[w];
                }
            }
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for &v in comp {
            let r = y[v] / x[v];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let norm = comp.iter().map(|&v| y[v]).fold(0.0, f64::max);
        for &v in comp {
            x[v] = y[v] / norm;
        }
        lambda = 0.5 * (lo + hi) - 1.0;
        if hi - lo <= SPECTRAL_TOL * hi {
            break;
        }
    }
    (lambda, x)
}

pub fn perron_component(g: &VertexGraph, comp: &[usize]) -> Perron {
    let (lambda, right) = power(g, comp, false);
    let (_, left) = power(g, comp, true);
    Perron {
        lambda,
        right,
        left,
        component: comp.to_vec(),
    }
}

/// Perron data of the component of largest spectral radius (the first such
/// component on ties).
pub fn dominant_perron(g: &VertexGraph) -> Perron {
    let mut best: Option<Perron> = None;
    for comp in g.nontrivial_sccs() {
        let p = perron_component(g, &comp);
        if best.as_ref().is_none_or(|b| p.lambda > b.lambda + 1e-12) {
            best = Some(p);
        }
    }
    best.expect("trimmed graphs carry a cycle")
}

/// Spectral radius of the adjacency matrix (max over irreducible components).
pub fn spectral_radius(g: &VertexGraph) -> f64 {
    g.nontrivial_sccs()
        .iter()
        .map(|c| power(g, c, false).0)
        .fold(0.0, f64::max)
}

/// Topological entropy `log λ` of a shift of finite type, in nats.
pub fn sft_entropy(x: &Subshift) -> Result<f64> {
    let g = x.require_graph("sft_entropy")?;
    Ok(spectral_radius(g).ln().max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_entropies() {
        let full = Subshift::full(2).unwrap();
        assert!((sft_entropy(&full).unwrap() - 2f64.ln()).abs() < 1e-12);
        let golden = Subshift::golden_mean();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((sft_entropy(&golden).unwrap() - phi.ln()).abs() < 1e-12);
        assert!(sft_entropy(&Subshift::period_two()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn reducible_takes_max() {
        // full 2-shift on {0,1} and a fixed point 2, joined 1 -> 2
        let x = Subshift::sft_str(3, &["02", "20", "21"]).unwrap();
        assert!((sft_entropy(&x).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn perron_vectors_are_eigenvectors() {
        let g = Subshift::golden_mean();
        let g = g.graph().unwrap();
        let p = dominant_perron(g);
        let a = g.adjacency();
        for i in 0..g.len() {
            let ar: f64 = (0..g.len()).map(|j| a[i][j] as f64 * p.right[j]).sum();
            assert!((ar - p.lambda * p.right[i]).abs() < 1e-10);
            let la: f64 = (0..g.len()).map(|j| p.left[j] * a[j][i] as f64).sum();
            assert!((la - p.lambda * p.left[i]).abs() < 1e-10);
        }
    }
}
