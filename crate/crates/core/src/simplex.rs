//! Lattice simplices, their face lattice, and inward primitive facet normals.
//!
//! Faces are identified combinatorially by vertex subsets; a simplex makes
//! the face lattice free, so no geometric hashing is needed. Facets are
//! indexed by their opposite vertex throughout, which fixes a deterministic
//! generator order for every dual cone.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::conegrp::Cone;
use crate::error::{Error, Result};
use crate::intlat::{self, IntMatrix, Rational, VolumeConvention};

/// Nonempty face of a simplex, as a sorted set of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    verts: Vec<usize>,
}

impl Face {
    pub fn new(mut verts: Vec<usize>) -> Self {
        assert!(!verts.is_empty(), "face must have at least one vertex");
        verts.sort_unstable();
        verts.dedup();
        Face { verts }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    pub fn dim(&self) -> usize {
        self.verts.len() - 1
    }

    pub fn contains(&self, v: usize) -> bool {
        self.verts.binary_search(&v).is_ok()
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.verts.iter().all(|v| other.contains(*v))
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.verts.len(), &self.verts).cmp(&(other.verts.len(), &other.verts))
    }
}

impl std::fmt::Display for Face {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.verts.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A facet together with its primitive inward normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetData {
    pub facet: Face,
    /// The unique vertex not on the facet.
    pub opposite: usize,
    /// Primitive integer normal with `normal · (m - p) > 0` for `p` on the
    /// facet and `m` the opposite vertex.
    pub normal: Vec<BigInt>,
    /// `normal · p` for any vertex `p` of the facet.
    pub offset: BigInt,
}

/// An `n`-simplex with `n+1` affinely independent vertices in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<Vec<BigInt>>,
    dim: usize,
    facets: Vec<FacetData>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<BigInt>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidSimplex(
                "need at least two vertices".to_string(),
            ));
        }
        let dim = vertices.len() - 1;
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::InvalidSimplex(format!(
                "{} vertices require ambient dimension {}",
                vertices.len(),
                dim
            )));
        }
        let edges: Vec<Vec<BigInt>> = vertices[1..]
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&vertices[0])
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>()
            })
            .collect();
        let edge_matrix = IntMatrix::from_rows(edges);
        if intlat::det(&edge_matrix).is_zero() {
            return Err(Error::InvalidSimplex(
                "vertices are affinely dependent".to_string(),
            ));
        }
        let mut simplex = Simplex {
            vertices,
            dim,
            facets: Vec::new(),
        };
        simplex.facets = (0..=dim)
            .map(|j| simplex.compute_facet(j))
            .collect::<Result<Vec<_>>>()?;
        Ok(simplex)
    }

    pub fn from_i64(vertices: &[&[i64]]) -> Result<Self> {
        Simplex::new(
            vertices
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<BigInt>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[BigInt] {
        &self.vertices[i]
    }

    /// The top face containing every vertex.
    pub fn top_face(&self) -> Face {
        Face::new((0..=self.dim).collect())
    }

    /// All `2^(n+1) - 1` nonempty faces, sorted by (dimension, vertex set).
    pub fn faces(&self) -> Vec<Face> {
        let count = self.dim + 1;
        let mut out: Vec<Face> = (1u32..(1u32 << count))
            .map(|mask| {
                Face::new(
                    (0..count)
                        .filter(|&v| mask & (1 << v) != 0)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Facet data for the facet opposite vertex `j`.
    pub fn facet(&self, opposite: usize) -> &FacetData {
        &self.facets[opposite]
    }

    /// Facet data for a given codimension-one face.
    pub fn facet_normal(&self, face: &Face) -> Result<&FacetData> {
        if face.dim() + 1 != self.dim {
            return Err(Error::UnknownFace(face.to_string()));
        }
        let opposite = (0..=self.dim)
            .find(|v| !face.contains(*v))
            .expect("a facet omits exactly one vertex");
        Ok(&self.facets[opposite])
    }

    /// Opposite-vertex indices of the facets containing `face`, ascending.
    pub fn containing_facet_indices(&self, face: &Face) -> Vec<usize> {
        (0..=self.dim).filter(|v| !face.contains(*v)).collect()
    }

    /// Opposite-vertex indices of the facets not containing `face`, ascending.
    pub fn avoiding_facet_indices(&self, face: &Face) -> Vec<usize> {
        (0..=self.dim).filter(|v| face.contains(*v)).collect()
    }

    /// The set `F_E` of facets containing `face`.
    pub fn facets_containing(&self, face: &Face) -> Vec<Face> {
        self.containing_facet_indices(face)
            .into_iter()
            .map(|j| self.facets[j].facet.clone())
            .collect()
    }

    /// The complement `H_E` of `F_E` among all `n+1` facets.
    pub fn facets_avoiding(&self, face: &Face) -> Vec<Face> {
        self.avoiding_facet_indices(face)
            .into_iter()
            .map(|j| self.facets[j].facet.clone())
            .collect()
    }

    /// The dual cone of a face: the cone spanned by the normals of all
    /// facets containing it, in ascending opposite-vertex order. The top
    /// face yields the zero cone.
    pub fn dual_cone(&self, face: &Face) -> Cone {
        let generators = self
            .containing_facet_indices(face)
            .into_iter()
            .map(|j| self.facets[j].normal.clone())
            .collect();
        Cone::new(self.dim, generators)
    }

    /// Normalized volume of a face; a vertex has volume 1.
    pub fn face_volume(&self, face: &Face, convention: VolumeConvention) -> Result<Rational> {
        let points: Vec<Vec<BigInt>> = face
            .vertices()
            .iter()
            .map(|&v| self.vertices[v].clone())
            .collect();
        intlat::lattice_volume(&points, convention)
    }

    fn compute_facet(&self, opposite: usize) -> Result<FacetData> {
        let n = self.dim;
        let verts: Vec<usize> = (0..=n).filter(|&v| v != opposite).collect();
        let face = Face::new(verts.clone());
        let base = &self.vertices[verts[0]];
        let mut normal = if n == 1 {
            vec![BigInt::from(1)]
        } else {
            let edges: Vec<Vec<BigInt>> = verts[1..]
                .iter()
                .map(|&v| {
                    self.vertices[v]
                        .iter()
                        .zip(base)
                        .map(|(a, b)| a - b)
                        .collect::<Vec<_>>()
                })
                .collect();
            // The right kernel of the edge matrix is one-dimensional; the
            // last column of the SNF column transform generates it.
            let edge_matrix = IntMatrix::from_rows(edges);
            let (_, _, v) = intlat::snf(&edge_matrix);
            let kernel: Vec<BigInt> = (0..n).map(|r| v.at(r, n - 1).clone()).collect();
            intlat::primitive(&kernel)?
        };
        let diff: Vec<BigInt> = self.vertices[opposite]
            .iter()
            .zip(base)
            .map(|(a, b)| a - b)
            .collect();
        let side = intlat::dot(&normal, &diff);
        if side.is_zero() {
            return Err(Error::InvalidSimplex(
                "facet normal orthogonal to opposite vertex".to_string(),
            ));
        }
        if side.is_negative() {
            for x in &mut normal {
                *x = -x.clone();
            }
        }
        let offset = intlat::dot(&normal, base);
        Ok(FacetData {
            facet: face,
            opposite,
            normal,
            offset,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard(n: usize) -> Simplex {
        let mut verts = vec![vec![0i64; n]];
        for i in 0..n {
            let mut v = vec![0i64; n];
            v[i] = 1;
            verts.push(v);
        }
        let rows: Vec<Vec<BigInt>> = verts
            .into_iter()
            .map(|v| v.into_iter().map(BigInt::from).collect())
            .collect();
        Simplex::new(rows).unwrap()
    }

    fn reeve(r: i64) -> Simplex {
        Simplex::from_i64(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, r]]).unwrap()
    }

    #[test]
    fn face_counts() {
        assert_eq!(standard(2).faces().len(), 7);
        assert_eq!(standard(1).faces().len(), 3);
        assert_eq!(standard(3).faces().len(), 15);
    }

    #[test]
    fn faces_sorted_by_dim_then_subset() {
        let faces = standard(2).faces();
        let dims: Vec<usize> = faces.iter().map(|f| f.dim()).collect();
        assert_eq!(dims, vec![0, 0, 0, 1, 1, 1, 2]);
        assert_eq!(faces[3].vertices(), &[0, 1]);
        assert_eq!(faces[4].vertices(), &[0, 2]);
        assert_eq!(faces[5].vertices(), &[1, 2]);
    }

    #[test]
    fn euler_relation_through_dim_five() {
        for n in 1..=5 {
            let s = standard(n);
            let sum: i64 = s
                .faces()
                .iter()
                .map(|f| if f.dim() % 2 == 0 { 1 } else { -1 })
                .sum();
            assert_eq!(sum, 1, "dim {}", n);
        }
    }

    #[test]
    fn standard_triangle_normals() {
        let s = standard(2);
        // Facet x = 0 omits vertex 1 = (1,0).
        let f = s.facet(1);
        assert_eq!(f.normal, vec![BigInt::from(1), BigInt::from(0)]);
        // Hypotenuse omits vertex 0 = (0,0).
        let h = s.facet(0);
        assert_eq!(h.normal, vec![BigInt::from(-1), BigInt::from(-1)]);
        assert_eq!(h.offset, BigInt::from(-1));
    }

    #[test]
    fn reeve_bottom_facet_normal() {
        let s = reeve(3);
        // Facet z = 0 omits vertex 3 = (1,1,3).
        let f = s.facet(3);
        assert_eq!(
            f.normal,
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]
        );
        assert_eq!(f.offset, BigInt::from(0));
    }

    #[test]
    fn inward_sign_condition_everywhere() {
        for s in [standard(2), standard(3), reeve(5)] {
            for fd in (0..=s.dim()).map(|j| s.facet(j)) {
                let p = s.vertex(fd.facet.vertices()[0]);
                let m = s.vertex(fd.opposite);
                let diff: Vec<BigInt> = m.iter().zip(p).map(|(a, b)| a - b).collect();
                assert!(intlat::dot(&fd.normal, &diff).is_positive());
            }
        }
    }

    #[test]
    fn containing_and_avoiding_partition_facets() {
        let s = standard(3);
        for face in s.faces() {
            let fe = s.facets_containing(&face);
            let he = s.facets_avoiding(&face);
            assert_eq!(fe.len(), s.dim() - face.dim());
            assert_eq!(he.len(), face.dim() + 1);
            assert_eq!(fe.len() + he.len(), s.dim() + 1);
        }
    }

    #[test]
    fn top_face_has_no_containing_facets() {
        let s = standard(2);
        assert!(s.facets_containing(&s.top_face()).is_empty());
        assert_eq!(s.dual_cone(&s.top_face()).rank(), 0);
    }

    #[test]
    fn vertex_dual_cone_of_standard_triangle() {
        let s = standard(2);
        let cone = s.dual_cone(&Face::new(vec![0]));
        assert_eq!(
            cone.generators(),
            &[
                vec![BigInt::from(1), BigInt::from(0)],
                vec![BigInt::from(0), BigInt::from(1)]
            ]
        );
    }

    #[test]
    fn segment_vertex_dual_cone() {
        let s = Simplex::from_i64(&[&[0], &[5]]).unwrap();
        let cone = s.dual_cone(&Face::new(vec![0]));
        assert_eq!(cone.generators(), &[vec![BigInt::from(1)]]);
    }

    #[test]
    fn face_volumes() {
        let s = Simplex::from_i64(&[&[0, 0], &[2, 0], &[0, 1]]).unwrap();
        let edge = Face::new(vec![0, 1]);
        assert_eq!(
            s.face_volume(&edge, VolumeConvention::Lattice).unwrap(),
            Rational::from(BigInt::from(2))
        );
        let vertex = Face::new(vec![2]);
        assert_eq!(
            s.face_volume(&vertex, VolumeConvention::Lattice).unwrap(),
            Rational::from(BigInt::from(1))
        );
        let top = s.top_face();
        assert_eq!(
            s.face_volume(&top, VolumeConvention::Lattice).unwrap(),
            Rational::from(BigInt::from(1))
        );
        assert_eq!(
            s.face_volume(&top, VolumeConvention::Normalized).unwrap(),
            Rational::from(BigInt::from(2))
        );
    }

    #[test]
    fn rejects_degenerate_vertices() {
        assert!(Simplex::from_i64(&[&[0, 0], &[1, 1], &[2, 2]]).is_err());
    }
}
