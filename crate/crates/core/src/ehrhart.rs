//! Assembly of the lattice point counting polynomial from cone data.
//!
//! For an `n`-simplex the engine forms one truncated power series from the
//! face lattice. Writing `F_E` for the facets containing a face `E`, `H_E`
//! for the rest, `ν_F` for normalized facet volumes, and `γ`, `G°`, `m` for
//! the angle data, interior classes and order of the dual-cone group from
//! [`crate::conegrp`], two assemblies are supported:
//!
//! * the *completed* kernel (the shipped default):
//!
//!   ```text
//!   Σ_{E ≤ Δ} Σ_{g ∈ G°_E} ∏_{F ∈ F_E} ν_F U (coth(πi γ_F(g) + ν_F U) + 1)
//!                         · ∏_{F ∈ H_E} ν_F U (coth(ν_F U) + 1)
//!   ```
//!
//!   where `ν U (coth(ν U) + 1)` is the pole-free kernel
//!   `(νU)/tanh(νU) + νU`. Each interior class contributes one product over
//!   all `n+1` facets, with the class angles twisting exactly the facets
//!   containing `E`.
//!
//! * the *split* kernel, the literal reading kept selectable for audit:
//!
//!   ```text
//!   Σ_{E ≤ Δ} 1/m(E) · [ Σ_{K ≤ E} ω_K ∏_{F ∈ H_K} (ν_F U)/tanh(ν_F U) ]
//!                     · [ Σ_{g ∈ G°_E} ∏_{F ∈ F_E} coth(πi γ_F(g) + ν_F U) ]
//!   ```
//!
//!   with `ω_K = m(K) ∏_{F ∈ F_K} (ν_F U)`. The two assemblies agree
//!   whenever every dual-cone group is trivial (and on every simplex of
//!   dimension at most two); on singular simplices of dimension three and
//!   up only the completed kernel reproduces brute-force counts.
//!
//! The counting polynomial is `Σ_r a_r b_r k^r`, where `a_r` is a series
//! coefficient and `b_r = ν(E) / (2^(n-r) m(E) ∏_{F∈F_E} ν_F)` is read off
//! any face `E` of dimension `r`. The remaining conventions are knobs
//! ([`ConventionProfile`]): the volume normalization, a uniform `U ↦ sU`,
//! the placement of the `2^(n-r)` factor, whether `a_r` is the coefficient
//! of `U^r` or of `U^(n-r)`, and the kernel form. [`calibrate`] pins all of
//! them against the brute-force oracle.
//!
//! Character sums are evaluated one Galois orbit at a time: the sum of a
//! coth product over an orbit of interior classes is the field trace of a
//! single product, which is rational. This keeps every intermediate series
//! over `Q` and turns the rationality of the final coefficients into a
//! checked invariant rather than an accident.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::conegrp::{self, ConeGroup};
use crate::cycser::{self, rational_part, TruncSeries};
use crate::error::{Error, Result};
use crate::intlat::{Rational, VolumeConvention};
use crate::oracle;
use crate::simplex::{Face, Simplex};

/// Placement of the `2^(n-r)` factor in the volume ratio `b_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoPowerPlacement {
    Denominator,
    Omitted,
    Numerator,
}

/// Which series coefficient multiplies `k^r`: degree `r` or degree `n-r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientPairing {
    Direct,
    Reversed,
}

/// How the series is assembled from the cone data; see the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelForm {
    /// Group-weighted face brackets times bare coth character sums, as
    /// literally printed.
    Split,
    /// Unweighted products of completed kernels `νU(coth + 1)`.
    Completed,
}

/// A complete choice of assembly conventions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConventionProfile {
    pub volume: VolumeConvention,
    /// Uniform substitution `U ↦ sU`; restricted to `1` or `1/2`.
    pub u_scale: Rational,
    pub b_power: TwoPowerPlacement,
    pub pairing: CoefficientPairing,
    pub kernel: KernelForm,
}

impl ConventionProfile {
    pub fn new(
        volume: VolumeConvention,
        u_scale: Rational,
        b_power: TwoPowerPlacement,
        pairing: CoefficientPairing,
        kernel: KernelForm,
    ) -> Result<Self> {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        if u_scale != Rational::one() && u_scale != half {
            return Err(Error::InvalidProfile(format!(
                "u_scale must be 1 or 1/2, got {}",
                u_scale
            )));
        }
        if pairing == CoefficientPairing::Reversed && u_scale != Rational::one() {
            // Under reversed pairing a u_scale of 1/2 is pointwise identical
            // to shifting the two-power placement, so the knob is pinned.
            return Err(Error::InvalidProfile(
                "reversed pairing fixes u_scale = 1".to_string(),
            ));
        }
        Ok(ConventionProfile {
            volume,
            u_scale,
            b_power,
            pairing,
            kernel,
        })
    }

    /// The profile selected by calibration against the counting oracle;
    /// shipped as the default.
    pub fn calibrated() -> Self {
        ConventionProfile {
            volume: VolumeConvention::Lattice,
            u_scale: Rational::one(),
            b_power: TwoPowerPlacement::Denominator,
            pairing: CoefficientPairing::Reversed,
            kernel: KernelForm::Completed,
        }
    }

    /// The literal reading with direct degree pairing and split kernels;
    /// kept selectable for audit. On a length-`L` segment it yields
    /// `2Lk + 1/2`.
    pub fn printed() -> Self {
        ConventionProfile {
            volume: VolumeConvention::Lattice,
            u_scale: Rational::one(),
            b_power: TwoPowerPlacement::Denominator,
            pairing: CoefficientPairing::Direct,
            kernel: KernelForm::Split,
        }
    }

    /// The full knob space searched by [`calibrate`]: per kernel form, 12
    /// direct profiles and 6 reversed ones (reversed pins `u_scale = 1`).
    pub fn enumerate() -> Vec<Self> {
        let volumes = [VolumeConvention::Lattice, VolumeConvention::Normalized];
        let scales = [
            Rational::one(),
            Rational::new(BigInt::one(), BigInt::from(2)),
        ];
        let powers = [
            TwoPowerPlacement::Denominator,
            TwoPowerPlacement::Omitted,
            TwoPowerPlacement::Numerator,
        ];
        let kernels = [KernelForm::Split, KernelForm::Completed];
        let mut out = Vec::new();
        for &kernel in &kernels {
            for &volume in &volumes {
                for u_scale in &scales {
                    for &b_power in &powers {
                        out.push(ConventionProfile {
                            volume,
                            u_scale: u_scale.clone(),
                            b_power,
                            pairing: CoefficientPairing::Direct,
                            kernel,
                        });
                    }
                }
            }
            for &volume in &volumes {
                for &b_power in &powers {
                    out.push(ConventionProfile {
                        volume,
                        u_scale: Rational::one(),
                        b_power,
                        pairing: CoefficientPairing::Reversed,
                        kernel,
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for ConventionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let volume = match self.volume {
            VolumeConvention::Lattice => "lattice",
            VolumeConvention::Normalized => "normalized",
        };
        let power = match self.b_power {
            TwoPowerPlacement::Denominator => "denominator",
            TwoPowerPlacement::Omitted => "omitted",
            TwoPowerPlacement::Numerator => "numerator",
        };
        let pairing = match self.pairing {
            CoefficientPairing::Direct => "direct",
            CoefficientPairing::Reversed => "reversed",
        };
        let kernel = match self.kernel {
            KernelForm::Split => "split",
            KernelForm::Completed => "completed",
        };
        write!(
            f,
            "volume={},u_scale={},two_power={},pairing={},kernel={}",
            volume, self.u_scale, power, pairing, kernel
        )
    }
}

impl FromStr for ConventionProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut volume = None;
        let mut u_scale = None;
        let mut b_power = None;
        let mut pairing = None;
        let mut kernel = None;
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, value) = part.split_once('=').ok_or_else(|| {
                Error::InvalidProfile(format!("expected key=value, got '{}'", part))
            })?;
            let value = value.trim();
            match key.trim() {
                "volume" => {
                    volume = Some(match value {
                        "lattice" => VolumeConvention::Lattice,
                        "normalized" => VolumeConvention::Normalized,
                        other => {
                            return Err(Error::InvalidProfile(format!(
                                "unknown volume convention '{}'",
                                other
                            )))
                        }
                    });
                }
                "u_scale" => {
                    u_scale = Some(match value {
                        "1" => Rational::one(),
                        "1/2" => Rational::new(BigInt::one(), BigInt::from(2)),
                        other => {
                            return Err(Error::InvalidProfile(format!(
                                "unknown u_scale '{}'",
                                other
                            )))
                        }
                    });
                }
                "two_power" => {
                    b_power = Some(match value {
                        "denominator" => TwoPowerPlacement::Denominator,
                        "omitted" => TwoPowerPlacement::Omitted,
                        "numerator" => TwoPowerPlacement::Numerator,
                        other => {
                            return Err(Error::InvalidProfile(format!(
                                "unknown two_power placement '{}'",
                                other
                            )))
                        }
                    });
                }
                "pairing" => {
                    pairing = Some(match value {
                        "direct" => CoefficientPairing::Direct,
                        "reversed" => CoefficientPairing::Reversed,
                        other => {
                            return Err(Error::InvalidProfile(format!(
                                "unknown pairing '{}'",
                                other
                            )))
                        }
                    });
                }
                "kernel" => {
                    kernel = Some(match value {
                        "split" => KernelForm::Split,
                        "completed" => KernelForm::Completed,
                        other => {
                            return Err(Error::InvalidProfile(format!(
                                "unknown kernel form '{}'",
                                other
                            )))
                        }
                    });
                }
                other => {
                    return Err(Error::InvalidProfile(format!("unknown knob '{}'", other)));
                }
            }
        }
        let default = ConventionProfile::calibrated();
        ConventionProfile::new(
            volume.unwrap_or(default.volume),
            u_scale.unwrap_or(default.u_scale),
            b_power.unwrap_or(default.b_power),
            pairing.unwrap_or(default.pairing),
            kernel.unwrap_or(default.kernel),
        )
    }
}

/// The counting polynomial with its factor breakdown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    pub n: usize,
    /// Series coefficients, already paired so that `coeffs[r] = a[r]*b[r]`.
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub coeffs: Vec<Rational>,
    pub profile: ConventionProfile,
}

impl EhrhartPolynomial {
    pub fn eval(&self, k: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * k + c;
        }
        acc
    }

    pub fn eval_int(&self, k: i64) -> Rational {
        self.eval(&Rational::from(BigInt::from(k)))
    }
}

// ---------------------------------------------------------------------------
// Per-simplex face table.
// ---------------------------------------------------------------------------

struct FaceEntry {
    face: Face,
    group: ConeGroup,
    /// Volume determinant of the face in its induced lattice.
    det: BigInt,
}

pub(crate) struct FaceTable {
    n: usize,
    entries: Vec<FaceEntry>,
    index: BTreeMap<Face, usize>,
    /// Facet volume determinants, indexed by opposite vertex.
    facet_dets: Vec<BigInt>,
}

impl FaceTable {
    fn build(simplex: &Simplex) -> Result<FaceTable> {
        let n = simplex.dim();
        let mut entries = Vec::new();
        let mut index = BTreeMap::new();
        for face in simplex.faces() {
            let group = conegrp::cone_group(&simplex.dual_cone(&face))?;
            let det = simplex
                .face_volume(&face, VolumeConvention::Normalized)?
                .to_integer();
            index.insert(face.clone(), entries.len());
            entries.push(FaceEntry { face, group, det });
        }
        let facet_dets = (0..=n)
            .map(|j| {
                simplex
                    .face_volume(&simplex.facet(j).facet, VolumeConvention::Normalized)
                    .map(|v| v.to_integer())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FaceTable {
            n,
            entries,
            index,
            facet_dets,
        })
    }

    /// Normalized volume of a face of dimension `d` from its determinant.
    fn nu_of_det(det: &BigInt, d: usize, convention: VolumeConvention) -> Rational {
        match convention {
            VolumeConvention::Normalized => Rational::from(det.clone()),
            VolumeConvention::Lattice => {
                let mut fact = BigInt::one();
                for i in 2..=d {
                    fact *= BigInt::from(i);
                }
                Rational::new(det.clone(), fact)
            }
        }
    }

    fn facet_nu(&self, opposite: usize, convention: VolumeConvention) -> Rational {
        Self::nu_of_det(&self.facet_dets[opposite], self.n.saturating_sub(1), convention)
    }

    fn face_nu(&self, entry: &FaceEntry, convention: VolumeConvention) -> Rational {
        Self::nu_of_det(&entry.det, entry.face.dim(), convention)
    }
}

// ---------------------------------------------------------------------------
// Series assembly.
// ---------------------------------------------------------------------------

/// Character sum of a cone group: `Σ_{g ∈ G°} ∏_j coth(πi γ_j(g) + w_j U)`,
/// evaluated orbit by orbit through field traces. The zero cone yields the
/// constant 1, an empty interior the zero series.
fn character_sum_raw(group: &ConeGroup, weights: &[Rational], order: usize) -> Result<TruncSeries> {
    if group.rank() == 0 {
        return Ok(TruncSeries::one(1, order));
    }
    assert_eq!(weights.len(), group.rank(), "one weight per generator");
    if group.interior().is_empty() {
        return Ok(TruncSeries::zero(1, order));
    }
    let mut total = TruncSeries::zero(1, order);
    for orbit in group.galois_orbits() {
        let gammas = group.gamma(orbit.rep);
        let mut term = TruncSeries::one(orbit.level, order);
        for (j, w) in weights.iter().enumerate() {
            let factor = cycser::coth_shift(&gammas[j], w, order)?;
            term = term.mul(&factor.lift_to_level(orbit.level)?)?;
        }
        total = total.add(&term.trace_to_rational())?;
    }
    Ok(total)
}

/// Like [`character_sum_raw`] but with the completed factor
/// `w_j U (coth(πi γ_j + w_j U) + 1)` per generator.
fn completed_character_sum(
    group: &ConeGroup,
    weights: &[Rational],
    order: usize,
) -> Result<TruncSeries> {
    if group.rank() == 0 {
        return Ok(TruncSeries::one(1, order));
    }
    assert_eq!(weights.len(), group.rank(), "one weight per generator");
    if group.interior().is_empty() {
        return Ok(TruncSeries::zero(1, order));
    }
    let mut total = TruncSeries::zero(1, order);
    for orbit in group.galois_orbits() {
        let gammas = group.gamma(orbit.rep);
        let mut term = TruncSeries::one(orbit.level, order);
        for (j, w) in weights.iter().enumerate() {
            let level = gammas[j]
                .denom()
                .to_u64()
                .expect("angle denominator fits u64");
            let factor = cycser::coth_shift(&gammas[j], w, order)?
                .add(&TruncSeries::one(level, order))?
                .shift_scale(1, w);
            term = term.mul(&factor.lift_to_level(orbit.level)?)?;
        }
        total = total.add(&term.trace_to_rational())?;
    }
    Ok(total)
}

/// Character sum with the profile's variable scale applied to the weights.
pub fn character_sum(
    group: &ConeGroup,
    weights: &[Rational],
    profile: &ConventionProfile,
    order: usize,
) -> Result<TruncSeries> {
    let scaled: Vec<Rational> = weights.iter().map(|w| w * &profile.u_scale).collect();
    character_sum_raw(group, &scaled, order)
}

/// The monomial `ω_K = m(K) ∏_{F ∈ F_K} (ν_F sU)`, truncated at order `n`.
pub fn omega(simplex: &Simplex, face: &Face, profile: &ConventionProfile) -> TruncSeries {
    let n = simplex.dim();
    let group = conegrp::cone_group(&simplex.dual_cone(face))
        .expect("valid simplex has nondegenerate dual cones");
    let mut c = Rational::from(group.order().clone());
    let containing = simplex.containing_facet_indices(face);
    for &j in &containing {
        let nu = simplex
            .face_volume(&simplex.facet(j).facet, profile.volume)
            .expect("facet volumes of a valid simplex exist");
        c *= nu * &profile.u_scale;
    }
    TruncSeries::one(1, n).shift_scale(containing.len(), &c)
}

/// The full series before variable scaling, at the given volume convention
/// and kernel form.
fn base_series(
    simplex: &Simplex,
    table: &FaceTable,
    volume: VolumeConvention,
    kernel: KernelForm,
    order: usize,
) -> Result<TruncSeries> {
    let n = table.n;
    let nu_facet: Vec<Rational> = (0..=n).map(|j| table.facet_nu(j, volume)).collect();
    let xtanh: Vec<TruncSeries> = nu_facet
        .iter()
        .map(|nu| cycser::x_over_tanh(nu, order))
        .collect();
    match kernel {
        KernelForm::Completed => {
            // Pole-free kernel (νU)/tanh(νU) + νU per facet.
            let completed: Vec<TruncSeries> = (0..=n)
                .map(|j| {
                    let mono = TruncSeries::one(1, order).shift_scale(1, &nu_facet[j]);
                    xtanh[j].add(&mono)
                })
                .collect::<Result<Vec<_>>>()?;
            let mut total = TruncSeries::zero(1, order);
            for entry in &table.entries {
                let containing = simplex.containing_facet_indices(&entry.face);
                let weights: Vec<Rational> =
                    containing.iter().map(|&j| nu_facet[j].clone()).collect();
                let char_series = completed_character_sum(&entry.group, &weights, order)?;
                if char_series.is_zero() {
                    continue;
                }
                let mut term = char_series;
                for &j in &simplex.avoiding_facet_indices(&entry.face) {
                    term = term.mul(&completed[j])?;
                }
                total = total.add(&term)?;
            }
            Ok(total)
        }
        KernelForm::Split => {
            // Bracket of each face K: ω_K times the tanh kernels of the
            // avoided facets. Independent of the outer face E.
            let mut brackets = Vec::with_capacity(table.entries.len());
            for entry in &table.entries {
                let containing = simplex.containing_facet_indices(&entry.face);
                let avoiding = simplex.avoiding_facet_indices(&entry.face);
                let mut c = Rational::from(entry.group.order().clone());
                for &j in &containing {
                    c *= &nu_facet[j];
                }
                let mut series = TruncSeries::one(1, order).shift_scale(containing.len(), &c);
                for &j in &avoiding {
                    series = series.mul(&xtanh[j])?;
                }
                brackets.push(series);
            }
            let mut total = TruncSeries::zero(1, order);
            for entry in &table.entries {
                let containing = simplex.containing_facet_indices(&entry.face);
                let weights: Vec<Rational> =
                    containing.iter().map(|&j| nu_facet[j].clone()).collect();
                let char_series = character_sum_raw(&entry.group, &weights, order)?;
                if char_series.is_zero() {
                    continue;
                }
                // Sum of brackets over the nonempty subfaces of E.
                let verts = entry.face.vertices();
                let mut sum_k = TruncSeries::zero(1, order);
                for mask in 1u32..(1u32 << verts.len()) {
                    let sub: Vec<usize> = verts
                        .iter()
                        .enumerate()
                        .filter(|(bit, _)| mask & (1 << bit) != 0)
                        .map(|(_, &v)| v)
                        .collect();
                    sum_k = sum_k.add(&brackets[table.index[&Face::new(sub)]])?;
                }
                let inv_m = Rational::new(BigInt::one(), entry.group.order().clone());
                let term = sum_k.mul(&char_series)?.scale_rational(&inv_m);
                total = total.add(&term)?;
            }
            Ok(total)
        }
    }
}

fn a_from_table(
    simplex: &Simplex,
    table: &FaceTable,
    profile: &ConventionProfile,
) -> Result<Vec<Rational>> {
    let n = table.n;
    let base = base_series(simplex, table, profile.volume, profile.kernel, n)?;
    let scaled = base.scale_var(&profile.u_scale);
    (0..=n)
        .map(|r| {
            let idx = match profile.pairing {
                CoefficientPairing::Direct => r,
                CoefficientPairing::Reversed => n - r,
            };
            rational_part(scaled.coeff(idx))
        })
        .collect()
}

fn b_from_table(table: &FaceTable, profile: &ConventionProfile) -> Result<Vec<Rational>> {
    let n = table.n;
    let mut out = Vec::with_capacity(n + 1);
    for r in 0..=n {
        let mut agreed: Option<(Rational, Face)> = None;
        for entry in table.entries.iter().filter(|e| e.face.dim() == r) {
            let mut denom = Rational::from(entry.group.order().clone());
            // ∏_{F ∈ F_E} ν_F over facets containing E.
            let containing: Vec<usize> = (0..=n).filter(|&v| !entry.face.contains(v)).collect();
            for &j in &containing {
                denom *= table.facet_nu(j, profile.volume);
            }
            let mut value = table.face_nu(entry, profile.volume) / denom;
            let two_pow = Rational::from(BigInt::from(2).pow((n - r) as u32));
            match profile.b_power {
                TwoPowerPlacement::Denominator => value /= &two_pow,
                TwoPowerPlacement::Omitted => {}
                TwoPowerPlacement::Numerator => value *= &two_pow,
            }
            match &agreed {
                None => agreed = Some((value, entry.face.clone())),
                Some((prev, first_face)) => {
                    if *prev != value {
                        return Err(Error::FaceDependence {
                            dim: r,
                            details: format!(
                                "face {} gives {} but face {} gives {}",
                                first_face, prev, entry.face, value
                            ),
                        });
                    }
                }
            }
        }
        out.push(agreed.expect("every dimension has a face").0);
    }
    Ok(out)
}

/// Series coefficients `a_0..a_n`, already paired with the degrees they
/// multiply under the profile's pairing convention.
pub fn a_coefficients(simplex: &Simplex, profile: &ConventionProfile) -> Result<Vec<Rational>> {
    let table = FaceTable::build(simplex)?;
    a_from_table(simplex, &table, profile)
}

/// Volume ratios `b_0..b_n`. Every face of dimension `r` must yield the same
/// value; disagreement is reported as `FaceDependence`.
pub fn b_coefficients(simplex: &Simplex, profile: &ConventionProfile) -> Result<Vec<Rational>> {
    let table = FaceTable::build(simplex)?;
    b_from_table(&table, profile)
}

/// The counting polynomial `Σ_r a_r b_r k^r` under a profile.
pub fn ehrhart_polynomial(
    simplex: &Simplex,
    profile: &ConventionProfile,
) -> Result<EhrhartPolynomial> {
    let table = FaceTable::build(simplex)?;
    let a = a_from_table(simplex, &table, profile)?;
    let b = b_from_table(&table, profile)?;
    let coeffs: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    Ok(EhrhartPolynomial {
        n: table.n,
        a,
        b,
        coeffs,
        profile: profile.clone(),
    })
}

// ---------------------------------------------------------------------------
// Calibration.
// ---------------------------------------------------------------------------

/// Comparison of one polynomial degree against the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRow {
    pub degree: usize,
    pub computed: Rational,
    pub expected: Rational,
    pub matches: bool,
    /// `computed / expected` when the expected coefficient is nonzero.
    pub ratio: Option<Rational>,
}

/// Outcome of one profile on one corpus simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexOutcome {
    pub name: String,
    pub degrees: Vec<DegreeRow>,
    pub error: Option<String>,
    pub matches: bool,
}

/// Outcome of one profile over the whole corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileOutcome {
    pub profile: ConventionProfile,
    pub entries: Vec<SimplexOutcome>,
    pub matches: bool,
}

/// Full per-profile, per-simplex, per-degree discrepancy table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalibrationReport {
    pub profiles: Vec<ProfileOutcome>,
    pub survivors: Vec<ConventionProfile>,
}

impl CalibrationReport {
    /// The unique surviving profile, or the reason there is none.
    pub fn unique_winner(&self) -> Result<ConventionProfile> {
        match self.survivors.len() {
            0 => Err(Error::NoProfileMatches),
            1 => Ok(self.survivors[0].clone()),
            k => Err(Error::AmbiguousProfile(k)),
        }
    }
}

/// Tries every profile in the knob space against oracle-interpolated
/// polynomials of the corpus. Corpus entries of dimension above
/// `max_dim_oracle` (when given) are skipped.
pub fn calibrate(
    corpus: &[(String, Simplex)],
    max_dim_oracle: Option<usize>,
) -> Result<CalibrationReport> {
    struct Prepared<'c> {
        name: &'c str,
        simplex: &'c Simplex,
        table: FaceTable,
        oracle_coeffs: Vec<Rational>,
    }
    let mut prepared = Vec::new();
    for (name, simplex) in corpus {
        let n = simplex.dim();
        if max_dim_oracle.is_some_and(|limit| n > limit) {
            continue;
        }
        let table = FaceTable::build(simplex)?;
        let counts = oracle::count_table(simplex, n as u64, false);
        let poly = oracle::interpolate(&counts, n);
        let mut oracle_coeffs = poly.coeffs().to_vec();
        oracle_coeffs.resize(n + 1, Rational::zero());
        prepared.push(Prepared {
            name,
            simplex,
            table,
            oracle_coeffs,
        });
    }

    let mut profiles = Vec::new();
    let mut survivors = Vec::new();
    for profile in ConventionProfile::enumerate() {
        let mut entries = Vec::new();
        let mut all_match = true;
        for p in &prepared {
            let outcome = match (
                a_from_table(p.simplex, &p.table, &profile),
                b_from_table(&p.table, &profile),
            ) {
                (Ok(a), Ok(b)) => {
                    let degrees: Vec<DegreeRow> = (0..=p.simplex.dim())
                        .map(|r| {
                            let computed = &a[r] * &b[r];
                            let expected = p.oracle_coeffs[r].clone();
                            let matches = computed == expected;
                            let ratio = (!expected.is_zero()).then(|| &computed / &expected);
                            DegreeRow {
                                degree: r,
                                computed,
                                expected,
                                matches,
                                ratio,
                            }
                        })
                        .collect();
                    let matches = degrees.iter().all(|d| d.matches);
                    SimplexOutcome {
                        name: p.name.to_string(),
                        degrees,
                        error: None,
                        matches,
                    }
                }
                (Err(e), _) | (_, Err(e)) => SimplexOutcome {
                    name: p.name.to_string(),
                    degrees: Vec::new(),
                    error: Some(e.to_string()),
                    matches: false,
                },
            };
            all_match &= outcome.matches;
            entries.push(outcome);
        }
        if all_match && !prepared.is_empty() {
            survivors.push(profile.clone());
        }
        profiles.push(ProfileOutcome {
            profile,
            entries,
            matches: all_match && !prepared.is_empty(),
        });
    }
    Ok(CalibrationReport {
        profiles,
        survivors,
    })
}
