//! The finite abelian group of a simplicial cone and its character angles.
//!
//! For a cone spanned by primitive independent generators `n_1..n_k`, all
//! data lives in the saturated plane lattice `P = Z^n ∩ span_R(n_i)`. The
//! dual vectors `m_i` are the unique primitive elements of `P` orthogonal to
//! every generator but one, with pairing numbers `q_i = m_i · n_i > 0`. The
//! group is `G = P / (Z n_1 + ... + Z n_k)`; its order equals the
//! multiplicity `|det|` of the generators in a basis of `P`.
//!
//! For a class `g`, the angle `γ_j(g) = (g · m_j) / q_j mod 1` is the `j`-th
//! coordinate of `g` in the ray basis, reduced mod 1. It is well defined:
//! shifting `g` by a generator `n_i` moves `g · m_j` by `q_j δ_ij`. The
//! interior subset collects the classes with every `γ_j ≠ 0`; equivalently,
//! the classes with a representative in the open fundamental parallelepiped
//! of the generators.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlat::{self, IntMatrix, LatticeBasis, Rational};

/// A simplicial cone given by primitive, linearly independent generators.
/// `k = 0` is the zero cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    ambient_dim: usize,
    generators: Vec<Vec<BigInt>>,
}

impl Cone {
    pub fn new(ambient_dim: usize, generators: Vec<Vec<BigInt>>) -> Self {
        assert!(
            generators.iter().all(|g| g.len() == ambient_dim),
            "generator dimension mismatch"
        );
        Cone {
            ambient_dim,
            generators,
        }
    }

    pub fn from_i64(ambient_dim: usize, generators: &[&[i64]]) -> Self {
        Cone::new(
            ambient_dim,
            generators
                .iter()
                .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }
}

/// Dual vectors and pairing numbers of a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDual {
    /// `m_i`: primitive elements of the plane lattice with `m_i · n_j = 0`
    /// for `i ≠ j`.
    pub m: Vec<Vec<BigInt>>,
    /// `q_i = m_i · n_i > 0`.
    pub q: Vec<BigInt>,
}

/// A Galois orbit of interior group elements: the conjugates of the angle
/// vector of `rep` under `t · γ mod 1` for `t` coprime to `level`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisOrbit {
    /// Index into the group's representative list (smallest angle vector).
    pub rep: usize,
    /// Common denominator of the orbit's angle vectors; also the order of
    /// the group element.
    pub level: u64,
    pub size: usize,
}

/// The finite abelian group of a cone with coset representatives, angle
/// table, and interior subset.
#[derive(Clone, Debug)]
pub struct ConeGroup {
    cone: Cone,
    plane: LatticeBasis,
    dual: ConeDual,
    order: BigInt,
    /// Representatives in plane-lattice coordinates.
    reps_plane: Vec<Vec<BigInt>>,
    /// The same representatives as ambient lattice vectors.
    reps: Vec<Vec<BigInt>>,
    /// `gammas[g][j] = γ_j(g)` as a reduced rational in `[0, 1)`.
    gammas: Vec<Vec<Rational>>,
    interior: Vec<usize>,
}

/// Computes the dual vectors and pairing numbers of a cone.
pub fn dual_data(cone: &Cone) -> Result<ConeDual> {
    if cone.rank() == 0 {
        return Ok(ConeDual {
            m: Vec::new(),
            q: Vec::new(),
        });
    }
    let plane = intlat::plane_lattice(cone.generators())?;
    dual_data_in_plane(cone, &plane)
}

fn dual_data_in_plane(cone: &Cone, plane: &LatticeBasis) -> Result<ConeDual> {
    let k = cone.rank();
    // gram[l][j] = B_l · n_j with B the plane basis (ambient dot products).
    let mut gram = IntMatrix::zeros(k, k);
    for l in 0..k {
        for j in 0..k {
            gram.set(l, j, intlat::dot(plane.basis.row(l), &cone.generators()[j]));
        }
    }
    let mut m = Vec::with_capacity(k);
    let mut q = Vec::with_capacity(k);
    for i in 0..k {
        let mut e = vec![Rational::zero(); k];
        e[i] = Rational::one();
        let c = intlat::solve_row_square(&gram, &e).ok_or(Error::DegenerateCone)?;
        let mut denom_lcm = BigInt::one();
        for x in &c {
            denom_lcm = denom_lcm.lcm(x.denom());
        }
        let cleared: Vec<BigInt> = c
            .iter()
            .map(|x| (x * Rational::from(denom_lcm.clone())).to_integer())
            .collect();
        let mut coeffs = intlat::primitive(&cleared)?;
        let mut vec_m = vec![BigInt::zero(); cone.ambient_dim()];
        for (l, coef) in coeffs.iter().enumerate() {
            for (j, out) in vec_m.iter_mut().enumerate() {
                *out += coef * plane.basis.at(l, j);
            }
        }
        let mut qi = intlat::dot(&vec_m, &cone.generators()[i]);
        if qi.is_zero() {
            return Err(Error::DegenerateCone);
        }
        if qi.is_negative() {
            for x in &mut vec_m {
                *x = -x.clone();
            }
            for x in &mut coeffs {
                *x = -x.clone();
            }
            qi = -qi;
        }
        m.push(vec_m);
        q.push(qi);
    }
    Ok(ConeDual { m, q })
}

/// Builds the full group data of a cone.
pub fn cone_group(cone: &Cone) -> Result<ConeGroup> {
    let k = cone.rank();
    if k == 0 {
        // Zero cone: trivial group whose identity counts as interior, so the
        // empty product convention downstream yields 1.
        return Ok(ConeGroup {
            cone: cone.clone(),
            plane: LatticeBasis {
                basis: IntMatrix::zeros(0, cone.ambient_dim()),
                input_coords: IntMatrix::zeros(0, 0),
            },
            dual: ConeDual {
                m: Vec::new(),
                q: Vec::new(),
            },
            order: BigInt::one(),
            reps_plane: vec![Vec::new()],
            reps: vec![vec![BigInt::zero(); cone.ambient_dim()]],
            gammas: vec![Vec::new()],
            interior: vec![0],
        });
    }
    let plane = intlat::plane_lattice(cone.generators())?;
    let dual = dual_data_in_plane(cone, &plane)?;
    // Generators in plane coordinates; their row lattice indexes the group.
    let gen_coords = plane.input_coords.clone();
    let (d, _, v) = intlat::snf(&gen_coords);
    let vinv = intlat::unimodular_inverse(&v);
    let mut order = BigInt::one();
    let mut diag = Vec::with_capacity(k);
    for i in 0..k {
        let di = d.at(i, i).clone();
        assert!(di.is_positive(), "independent generators give positive SNF");
        order *= &di;
        diag.push(di.to_u64().expect("group order fits in u64"));
    }
    let count = order.to_u64().expect("group order fits in u64") as usize;
    let mut reps_plane = Vec::with_capacity(count);
    let mut reps = Vec::with_capacity(count);
    let mut gammas = Vec::with_capacity(count);
    let mut interior = Vec::new();
    let mut w = vec![0u64; k];
    loop {
        // rep = w * V^-1 in plane coordinates.
        let mut rp = vec![BigInt::zero(); k];
        for (i, &wi) in w.iter().enumerate() {
            if wi == 0 {
                continue;
            }
            let wi = BigInt::from(wi);
            for (j, out) in rp.iter_mut().enumerate() {
                *out += &wi * vinv.at(i, j);
            }
        }
        let mut amb = vec![BigInt::zero(); cone.ambient_dim()];
        for (i, coef) in rp.iter().enumerate() {
            for (j, out) in amb.iter_mut().enumerate() {
                *out += coef * plane.basis.at(i, j);
            }
        }
        let gamma: Vec<Rational> = (0..k)
            .map(|j| {
                let num = intlat::dot(&amb, &dual.m[j]);
                frac(&Rational::new(num, dual.q[j].clone()))
            })
            .collect();
        if gamma.iter().all(|g| !g.is_zero()) {
            interior.push(reps.len());
        }
        reps_plane.push(rp);
        reps.push(amb);
        gammas.push(gamma);
        // Odometer over the SNF box, last coordinate fastest.
        let mut pos = k;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            w[pos] += 1;
            if w[pos] < diag[pos] {
                break;
            }
            w[pos] = 0;
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
        }
        if pos == usize::MAX {
            break;
        }
    }
    assert_eq!(reps.len(), count);
    Ok(ConeGroup {
        cone: cone.clone(),
        plane,
        dual,
        order,
        reps_plane,
        reps,
        gammas,
        interior,
    })
}

/// The angle table of a group: one row per coset representative.
pub fn gamma_table(group: &ConeGroup) -> Vec<Vec<Rational>> {
    group.gammas.clone()
}

impl ConeGroup {
    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn rank(&self) -> usize {
        self.cone.rank()
    }

    pub fn plane(&self) -> &LatticeBasis {
        &self.plane
    }

    pub fn dual(&self) -> &ConeDual {
        &self.dual
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    /// Coset representatives as ambient lattice vectors.
    pub fn reps(&self) -> &[Vec<BigInt>] {
        &self.reps
    }

    /// Coset representatives in plane-lattice coordinates.
    pub fn reps_plane(&self) -> &[Vec<BigInt>] {
        &self.reps_plane
    }

    pub fn gamma(&self, idx: usize) -> &[Rational] {
        &self.gammas[idx]
    }

    pub fn gammas(&self) -> &[Vec<Rational>] {
        &self.gammas
    }

    /// Indices of the interior classes (all angles nonzero).
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn is_interior(&self, idx: usize) -> bool {
        self.gammas[idx].iter().all(|g| !g.is_zero())
    }

    /// Angle of an arbitrary ambient vector of the plane lattice, computed
    /// from the dual pairing. Used by tests to check representative
    /// independence.
    pub fn gamma_of_vector(&self, v: &[BigInt]) -> Vec<Rational> {
        (0..self.rank())
            .map(|j| {
                let num = intlat::dot(v, &self.dual.m[j]);
                frac(&Rational::new(num, self.dual.q[j].clone()))
            })
            .collect()
    }

    /// Exact coordinates of a representative in the ray basis, an
    /// independent route to the angles: `γ_j = frac(coordinate_j)`.
    pub fn ray_coordinates(&self, idx: usize) -> Vec<Rational> {
        let k = self.rank();
        if k == 0 {
            return Vec::new();
        }
        let rhs: Vec<Rational> = self.reps_plane[idx]
            .iter()
            .map(|x| Rational::from(x.clone()))
            .collect();
        intlat::solve_row_square(&self.plane.input_coords, &rhs)
            .expect("ray matrix is invertible for independent generators")
    }

    /// The smallest positive multiple of a class that is the identity; also
    /// the lcm of its angle denominators.
    pub fn element_level(&self, idx: usize) -> u64 {
        let mut level = BigInt::one();
        for g in &self.gammas[idx] {
            level = level.lcm(g.denom());
        }
        level.to_u64().expect("element order fits in u64")
    }

    /// Partition of the interior classes into Galois orbits under
    /// `γ ↦ t·γ mod 1`, `gcd(t, level) = 1`.
    pub fn galois_orbits(&self) -> Vec<GaloisOrbit> {
        let mut index_of: BTreeMap<&[Rational], usize> = BTreeMap::new();
        for &idx in &self.interior {
            let prev = index_of.insert(self.gammas[idx].as_slice(), idx);
            debug_assert!(prev.is_none(), "angle vectors identify classes");
        }
        let mut seen = vec![false; self.reps.len()];
        let mut orbits = Vec::new();
        for &start in &self.interior {
            if seen[start] {
                continue;
            }
            let level = self.element_level(start);
            let mut members = Vec::new();
            for t in 1..=level {
                if gcd_u64(t, level) != 1 {
                    continue;
                }
                let image: Vec<Rational> = self.gammas[start]
                    .iter()
                    .map(|g| frac(&(g * Rational::from(BigInt::from(t)))))
                    .collect();
                let &idx = index_of
                    .get(image.as_slice())
                    .expect("interior is closed under the Galois action");
                members.push(idx);
            }
            let rep = *members
                .iter()
                .min_by(|&&a, &&b| self.gammas[a].cmp(&self.gammas[b]))
                .expect("orbit is nonempty");
            for &m in &members {
                seen[m] = true;
            }
            orbits.push(GaloisOrbit {
                rep,
                level,
                size: members.len(),
            });
        }
        orbits
    }
}

pub(crate) fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn dual_of_orthonormal_cone() {
        let cone = Cone::from_i64(2, &[&[1, 0], &[0, 1]]);
        let dual = dual_data(&cone).unwrap();
        assert_eq!(dual.m[0], vec![BigInt::from(1), BigInt::from(0)]);
        assert_eq!(dual.m[1], vec![BigInt::from(0), BigInt::from(1)]);
        assert_eq!(dual.q, vec![BigInt::from(1), BigInt::from(1)]);
    }

    #[test]
    fn dual_of_singular_plane_cone() {
        let cone = Cone::from_i64(2, &[&[1, 0], &[1, 2]]);
        let dual = dual_data(&cone).unwrap();
        assert_eq!(dual.m[0], vec![BigInt::from(2), BigInt::from(-1)]);
        assert_eq!(dual.q[0], BigInt::from(2));
        assert_eq!(dual.m[1], vec![BigInt::from(0), BigInt::from(1)]);
        assert_eq!(dual.q[1], BigInt::from(2));
    }

    #[test]
    fn dual_of_ray() {
        let cone = Cone::from_i64(1, &[&[1]]);
        let dual = dual_data(&cone).unwrap();
        assert_eq!(dual.m, vec![vec![BigInt::from(1)]]);
        assert_eq!(dual.q, vec![BigInt::from(1)]);
    }

    #[test]
    fn dual_orthogonality_and_positivity() {
        let cone = Cone::from_i64(3, &[&[1, 0, 0], &[1, 2, 0], &[1, 1, 3]]);
        let dual = dual_data(&cone).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let prod = intlat::dot(&dual.m[i], &cone.generators()[j]);
                if i == j {
                    assert!(prod.is_positive());
                    assert_eq!(prod, dual.q[i]);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
    }

    #[test]
    fn dual_rejects_dependent_generators() {
        let cone = Cone::from_i64(2, &[&[1, 0], &[2, 0]]);
        assert_eq!(dual_data(&cone), Err(Error::DegenerateCone));
    }

    #[test]
    fn smooth_cone_group_is_trivial() {
        let cone = Cone::from_i64(2, &[&[1, 0], &[0, 1]]);
        let g = cone_group(&cone).unwrap();
        assert_eq!(g.order(), &BigInt::one());
        assert!(g.interior().is_empty());
        assert_eq!(g.gammas(), &[vec![rat(0, 1), rat(0, 1)]]);
    }

    #[test]
    fn index_two_cone_group() {
        let cone = Cone::from_i64(2, &[&[1, 0], &[1, 2]]);
        let g = cone_group(&cone).unwrap();
        assert_eq!(g.order(), &BigInt::from(2));
        assert_eq!(g.interior().len(), 1);
        let idx = g.interior()[0];
        assert_eq!(g.gamma(idx), &[rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn zero_cone_group_convention() {
        let cone = Cone::new(3, Vec::new());
        let g = cone_group(&cone).unwrap();
        assert_eq!(g.order(), &BigInt::one());
        assert_eq!(g.interior(), &[0]);
        assert!(g.gamma(0).is_empty());
    }

    #[test]
    fn gamma_table_of_index_q_cone() {
        // <(1,0),(1,q)>: classes are (0,j) with angles ((q-j)/q mod 1, j/q).
        let q = 5i64;
        let cone = Cone::from_i64(2, &[&[1, 0], &[1, q]]);
        let g = cone_group(&cone).unwrap();
        assert_eq!(g.order(), &BigInt::from(q));
        let mut angle_rows: Vec<Vec<Rational>> = g.gammas().to_vec();
        angle_rows.sort();
        let mut expected: Vec<Vec<Rational>> = (0..q)
            .map(|j| {
                vec![
                    frac(&rat(-j, q)),
                    frac(&rat(j, q)),
                ]
            })
            .collect();
        expected.sort();
        assert_eq!(angle_rows, expected);
        assert_eq!(g.interior().len(), (q - 1) as usize);
    }

    #[test]
    fn gamma_denominators_divide_q() {
        let cone = Cone::from_i64(2, &[&[2, -1], &[0, 1]]);
        let g = cone_group(&cone).unwrap();
        for row in g.gammas() {
            for (j, gamma) in row.iter().enumerate() {
                assert!(g.dual().q[j].mod_floor(gamma.denom()).is_zero());
            }
        }
    }

    #[test]
    fn gamma_matches_ray_coordinates() {
        for cone in [
            Cone::from_i64(2, &[&[1, 0], &[1, 3]]),
            Cone::from_i64(2, &[&[2, -1], &[0, 1]]),
            Cone::from_i64(3, &[&[1, 0, 0], &[1, 2, 0], &[1, 1, 3]]),
        ] {
            let g = cone_group(&cone).unwrap();
            for idx in 0..g.reps().len() {
                let coords = g.ray_coordinates(idx);
                let gammas = g.gamma(idx);
                for j in 0..g.rank() {
                    assert_eq!(frac(&coords[j]), gammas[j]);
                }
            }
        }
    }

    #[test]
    fn gamma_representative_independent_under_generator_shifts() {
        let cone = Cone::from_i64(2, &[&[1, 0], &[1, 3]]);
        let g = cone_group(&cone).unwrap();
        for idx in 0..g.reps().len() {
            let base = g.gamma(idx).to_vec();
            // Shift by an arbitrary Z-combination of the generators.
            for (c0, c1) in [(1i64, 0i64), (0, 1), (2, -3), (-5, 4)] {
                let shifted: Vec<BigInt> = g.reps()[idx]
                    .iter()
                    .enumerate()
                    .map(|(j, x)| {
                        x + BigInt::from(c0) * &cone.generators()[0][j]
                            + BigInt::from(c1) * &cone.generators()[1][j]
                    })
                    .collect();
                assert_eq!(g.gamma_of_vector(&shifted), base);
            }
        }
    }

    #[test]
    fn order_equals_generator_determinant() {
        let cone = Cone::from_i64(3, &[&[1, 0, 0], &[1, 2, 0], &[1, 1, 3]]);
        let g = cone_group(&cone).unwrap();
        assert_eq!(g.order(), &intlat::det(&g.plane().input_coords).abs());
        assert_eq!(g.reps().len(), 6);
    }

    #[test]
    fn interior_matches_open_parallelepiped_of_generators() {
        let cone = Cone::from_i64(2, &[&[1, 0], &[1, 4]]);
        let g = cone_group(&cone).unwrap();
        for idx in 0..g.reps().len() {
            let coords = g.ray_coordinates(idx);
            let open = coords.iter().all(|c| !frac(c).is_zero());
            assert_eq!(g.is_interior(idx), open);
        }
    }

    #[test]
    fn galois_orbits_partition_interior() {
        let cone = Cone::from_i64(2, &[&[1, 0], &[1, 6]]);
        let g = cone_group(&cone).unwrap();
        let orbits = g.galois_orbits();
        let total: usize = orbits.iter().map(|o| o.size).sum();
        assert_eq!(total, g.interior().len());
        for orbit in &orbits {
            assert_eq!(orbit.size as u64, euler_phi(orbit.level));
        }
    }

    fn euler_phi(n: u64) -> u64 {
        (1..=n).filter(|&t| gcd_u64(t, n) == 1).count() as u64
    }

    #[test]
    fn lower_dimensional_cone_in_bigger_ambient() {
        // A 2-dimensional cone inside Z^3 whose plane is not a coordinate
        // plane: generators (1,1,0) and (1,-1,2).
        let cone = Cone::from_i64(3, &[&[1, 1, 0], &[1, -1, 2]]);
        let g = cone_group(&cone).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let prod = intlat::dot(&g.dual().m[i], &cone.generators()[j]);
                if i == j {
                    assert_eq!(prod, g.dual().q[i]);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
        // The plane lattice contains the duals.
        for m in &g.dual().m {
            assert!(g.plane().coordinates_of(m).is_some());
        }
    }
}
