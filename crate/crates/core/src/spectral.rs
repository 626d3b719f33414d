//! Laplacian, Moore-Penrose pseudoinverse and effective resistance.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::{EquivalentSimpleGraph, UnionFind, VertexId};

/// Relative cutoff below which eigenvalues count as zero.
pub const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianMatrix {
    pub matrix: DMatrix<f64>,
}

impl LaplacianMatrix {
    /// `D - W` for an undirected weighted edge list over `n` vertices.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut l = DMatrix::zeros(n, n);
        for (a, b, w) in edges {
            l[(a, b)] -= w;
            l[(b, a)] -= w;
            l[(a, a)] += w;
            l[(b, b)] += w;
        }
        Self { matrix: l }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PseudoinverseMatrix {
    pub matrix: DMatrix<f64>,
}

impl PseudoinverseMatrix {
    pub fn get(&self, a: VertexId, b: VertexId) -> f64 {
        self.matrix[(a.0, b.0)]
    }

    /// `(e_a - e_b)^T L+ (e_a - e_b)`.
    pub fn resistance(&self, a: VertexId, b: VertexId) -> f64 {
        self.get(a, a) + self.get(b, b) - 2.0 * self.get(a, b)
    }
}

pub fn laplacian(g: &EquivalentSimpleGraph) -> LaplacianMatrix {
    LaplacianMatrix::from_edges(
        g.n_vertices(),
        g.edges().iter().map(|e| (e.u.0, e.v.0, e.weight)),
    )
}

pub fn pseudoinverse(l: &LaplacianMatrix) -> PseudoinverseMatrix {
    // a Laplacian assembled by `from_edges` is symmetric by construction
    PseudoinverseMatrix {
        matrix: pseudoinverse_symmetric(&l.matrix).expect("Laplacian is symmetric"),
    }
}

pub fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Precondition(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let scale = a.amax().max(1.0);
    let asym = (a - a.transpose()).amax();
    if asym > 1e-12 * scale || !asym.is_finite() {
        return Err(Error::Asymmetric(asym));
    }
    Ok(())
}

/// Moore-Penrose inverse of a symmetric matrix. Blocks that are not coupled
/// by nonzero entries are inverted independently.
pub fn pseudoinverse_symmetric(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_symmetric(a)?;
    let n = a.nrows();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if a[(i, j)] != 0.0 {
                uf.union(i, j);
            }
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        blocks.entry(uf.find(i)).or_default().push(i);
    }

    let mut out = DMatrix::zeros(n, n);
    for idx in blocks.values() {
        let k = idx.len();
        let sub = DMatrix::from_fn(k, k, |i, j| a[(idx[i], idx[j])]);
        let eig = SymmetricEigen::new(sub);
        let max = eig.eigenvalues.amax();
        let cutoff = RANK_TOL * max;
        let mut inv = DMatrix::zeros(k, k);
        for (c, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda.abs() <= cutoff || lambda == 0.0 {
                continue;
            }
            let q = eig.eigenvectors.column(c);
            inv += (q * q.transpose()) / lambda;
        }
        for i in 0..k {
            for j in 0..k {
                out[(idx[i], idx[j])] = 0.5 * (inv[(i, j)] + inv[(j, i)]);
            }
        }
    }
    Ok(out)
}

/// Effective resistance between two vertices of the same component.
pub fn effective_resistance(g: &EquivalentSimpleGraph, a: VertexId, b: VertexId) -> Result<f64> {
    if g.component_of(a) != g.component_of(b) {
        return Err(Error::DifferentComponents);
    }
    Ok(g.pseudoinverse().resistance(a, b).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Layer, TemporalPolicy, TimeEvolvingGraph, TimeModel};

    fn static_graph(vertices: &[&str], edges: &[(&str, &str, f64)]) -> EquivalentSimpleGraph {
        TimeEvolvingGraph::new(
            TimeModel::Linear,
            1,
            vec![Layer::new(0, vertices, edges)],
            TemporalPolicy::MarkovComplete { alpha: 1.0 },
        )
        .build()
        .unwrap()
    }

    fn id(g: &EquivalentSimpleGraph, s: &str) -> VertexId {
        g.vertex_id(s, 0).unwrap()
    }

    #[test]
    fn single_edge_laplacian_and_pinv() {
        let g = static_graph(&["A", "B"], &[("A", "B", 1.0)]);
        let l = laplacian(&g);
        assert_eq!(l.matrix, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        let p = pseudoinverse(&l);
        let want = DMatrix::from_row_slice(2, 2, &[0.25, -0.25, -0.25, 0.25]);
        assert!((p.matrix - want).amax() < 1e-15);
    }

    #[test]
    fn triangle_laplacian() {
        let g = static_graph(&["A", "B", "C"], &[("A", "B", 1.0), ("B", "C", 1.0), ("A", "C", 1.0)]);
        let l = laplacian(&g).matrix;
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(l[(i, j)], if i == j { 2.0 } else { -1.0 });
            }
        }
    }

    #[test]
    fn resistance_examples() {
        let g = static_graph(&["A", "B"], &[("A", "B", 2.0)]);
        let r = effective_resistance(&g, id(&g, "A"), id(&g, "B")).unwrap();
        assert!((r - 0.5).abs() < 1e-14);

        let g = static_graph(&["A", "B", "C"], &[("A", "B", 1.0), ("B", "C", 1.0)]);
        let r = effective_resistance(&g, id(&g, "A"), id(&g, "C")).unwrap();
        assert!((r - 2.0).abs() < 1e-13);

        let g = static_graph(&["A", "B", "C"], &[("A", "B", 1.0), ("B", "C", 1.0), ("A", "C", 1.0)]);
        // one unit resistor in parallel with two in series
        let parallel = 1.0 * 2.0 / (1.0 + 2.0);
        for (a, b) in [("A", "B"), ("B", "C"), ("A", "C")] {
            let r = effective_resistance(&g, id(&g, a), id(&g, b)).unwrap();
            assert!((r - parallel).abs() < 1e-13);
        }
    }

    #[test]
    fn components_are_separate() {
        let g = static_graph(&["A", "B", "C", "D"], &[("A", "B", 1.0), ("C", "D", 3.0)]);
        assert_eq!(
            effective_resistance(&g, id(&g, "A"), id(&g, "C")),
            Err(Error::DifferentComponents)
        );
        let p = g.pseudoinverse();
        assert_eq!(p.get(id(&g, "A"), id(&g, "C")), 0.0);
        let r = effective_resistance(&g, id(&g, "C"), id(&g, "D")).unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(pseudoinverse_symmetric(&a), Err(Error::Asymmetric(_))));
    }

    #[test]
    fn pinv_annihilates_constants() {
        let g = static_graph(
            &["A", "B", "C", "D"],
            &[("A", "B", 1.0), ("B", "C", 0.5), ("C", "D", 2.0), ("A", "D", 1.5)],
        );
        let p = &g.pseudoinverse().matrix;
        for i in 0..4 {
            let s: f64 = p.row(i).iter().sum();
            assert!(s.abs() < 1e-13);
        }
    }
}
