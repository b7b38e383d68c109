//! Domain vocabulary: analyzer orientations, ports, source modes, coincidence
//! tables and raw count records.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Orientation of a polarizer axis in the polarization plane.
///
/// An axis has no direction, so the stored value is reduced modulo π into
/// `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle<T> {
    rad: T,
}

impl<T: Scalar> Angle<T> {
    /// Builds a normalized orientation from radians. Fails on NaN or infinities.
    pub fn new(radians: T) -> Result<Self> {
        normalize_angle(radians)
    }

    pub fn from_degrees(degrees: T) -> Result<Self> {
        Self::new(degrees.to_radians())
    }

    pub fn zero() -> Self {
        Angle { rad: T::zero() }
    }

    /// Normalized value in radians, always in `[0, π)`.
    pub fn radians(self) -> T {
        self.rad
    }

    pub fn degrees(self) -> T {
        self.rad.to_degrees()
    }

    /// Rotates by `delta` radians and renormalizes.
    pub fn rotated(self, delta: T) -> Self {
        Angle {
            rad: reduce(self.rad + delta),
        }
    }

    /// The axis perpendicular to this one.
    pub fn orthogonal(self) -> Self {
        self.rotated(T::FRAC_PI_2())
    }

    /// Orientation relative to `reference`, i.e. `self - reference` mod π.
    pub fn relative_to(self, reference: Angle<T>) -> Self {
        self.rotated(-reference.rad)
    }

    /// Shortest distance between two orientations on the π-periodic circle.
    pub fn distance(self, other: Angle<T>) -> T {
        let d = (self.rad - other.rad).abs();
        d.min(T::PI() - d)
    }
}

impl<T: Scalar> fmt::Display for Angle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.rad)
    }
}

fn reduce<T: Scalar>(x: T) -> T {
    let pi = T::PI();
    let mut r = x % pi;
    if r < T::zero() {
        r = r + pi;
    }
    // -tiny + π rounds to π
    if r >= pi {
        r = T::zero();
    }
    r
}

/// Reduces `x` radians modulo π into `[0, π)`.
pub fn normalize_angle<T: Scalar>(x: T) -> Result<Angle<T>> {
    if !x.is_finite() {
        return Err(Error::domain(format!("angle must be finite, got {x}")));
    }
    Ok(Angle { rad: reduce(x) })
}

/// Output port of a two-port analyzer.
///
/// `V` is the port transmitted along the analyzer axis, `H` the orthogonal
/// one. Reading port `H` at angle θ is the same as reading port `V` at θ + π/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Port {
    V,
    H,
}

impl Port {
    pub const ALL: [Port; 2] = [Port::V, Port::H];

    /// Rotation applied to the analyzer axis to read this port as `V`.
    pub fn offset<T: Scalar>(self) -> T {
        match self {
            Port::V => T::zero(),
            Port::H => T::FRAC_PI_2(),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Port::V => 0,
            Port::H => 1,
        }
    }
}

/// Which of the two mutually exclusive anticorrelated pairs the source emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SourceMode {
    /// Channel 1 polarized along the source axis, channel 2 perpendicular.
    HV,
    /// The exchange of `HV`.
    VH,
}

impl SourceMode {
    pub const ALL: [SourceMode; 2] = [SourceMode::HV, SourceMode::VH];

    /// Polarization of the `(channel 1, channel 2)` pulses relative to the source axis.
    pub fn polarizations<T: Scalar>(self) -> (T, T) {
        match self {
            SourceMode::HV => (T::zero(), T::FRAC_PI_2()),
            SourceMode::VH => (T::FRAC_PI_2(), T::zero()),
        }
    }
}

/// Source axis orientation and the probability of emitting mode `HV`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceConfig<T> {
    axis: Angle<T>,
    mode_weight: T,
}

impl<T: Scalar> SourceConfig<T> {
    pub fn new(axis: Angle<T>, mode_weight: T) -> Result<Self> {
        if !(mode_weight >= T::zero() && mode_weight <= T::one()) {
            return Err(Error::domain(format!(
                "mode weight must lie in [0, 1], got {mode_weight}"
            )));
        }
        Ok(SourceConfig { axis, mode_weight })
    }

    pub fn axis(&self) -> Angle<T> {
        self.axis
    }

    /// Probability that a pair is emitted in mode `HV`.
    pub fn mode_weight(&self) -> T {
        self.mode_weight
    }

    pub fn weight_of(&self, mode: SourceMode) -> T {
        match mode {
            SourceMode::HV => self.mode_weight,
            SourceMode::VH => T::one() - self.mode_weight,
        }
    }
}

impl<T: Scalar> Default for SourceConfig<T> {
    fn default() -> Self {
        SourceConfig {
            axis: Angle::zero(),
            mode_weight: T::lit(0.5),
        }
    }
}

/// Joint outcome probabilities `P(i, j)` for ports `i` in channel 1 and `j` in
/// channel 2, stored in the order VV, VH, HV, HH.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceTable<T> {
    cells: [T; 4],
}

impl<T: Scalar> CoincidenceTable<T> {
    /// Validating constructor: entries must lie in `[0, 1]` and sum to one
    /// within [`Scalar::identity_tolerance`].
    pub fn new(p_vv: T, p_vh: T, p_hv: T, p_hh: T) -> Result<Self> {
        let cells = [p_vv, p_vh, p_hv, p_hh];
        let tol = T::identity_tolerance();
        for &p in &cells {
            if !(p >= -tol && p <= T::one() + tol) {
                return Err(Error::domain(format!("probability {p} outside [0, 1]")));
            }
        }
        let sum = cells.iter().fold(T::zero(), |a, &b| a + b);
        if (sum - T::one()).abs() > tol {
            return Err(Error::domain(format!("table sums to {sum}, expected 1")));
        }
        Ok(CoincidenceTable { cells })
    }

    /// Assembles a table from cells the caller has computed from a normalized
    /// distribution. Rounding noise below zero is clamped.
    pub(crate) fn from_cells(cells: [T; 4]) -> Self {
        let t = CoincidenceTable {
            cells: cells.map(|p| p.max(T::zero())),
        };
        debug_assert!(
            (t.sum() - T::one()).abs() <= T::identity_tolerance(),
            "unnormalized table {:?}",
            t.cells
        );
        t
    }

    pub fn p_vv(&self) -> T {
        self.cells[0]
    }
    pub fn p_vh(&self) -> T {
        self.cells[1]
    }
    pub fn p_hv(&self) -> T {
        self.cells[2]
    }
    pub fn p_hh(&self) -> T {
        self.cells[3]
    }

    pub fn get(&self, port1: Port, port2: Port) -> T {
        self.cells[2 * port1.index() + port2.index()]
    }

    /// Entries in VV, VH, HV, HH order.
    pub fn cells(&self) -> [T; 4] {
        self.cells
    }

    pub fn sum(&self) -> T {
        self.cells.iter().fold(T::zero(), |a, &b| a + b)
    }

    /// Probability of `port` in channel 1, summed over channel 2.
    pub fn marginal_first(&self, port: Port) -> T {
        self.get(port, Port::V) + self.get(port, Port::H)
    }

    pub fn marginal_second(&self, port: Port) -> T {
        self.get(Port::V, port) + self.get(Port::H, port)
    }

    /// System correlation `(P_vv − P_vh − P_hv + P_hh) / ΣP`.
    pub fn chi(&self) -> T {
        let [vv, vh, hv, hh] = self.cells;
        let total = vv + vh + hv + hh;
        if total == T::zero() {
            return T::zero();
        }
        ((vv - vh - hv + hh) / total).max(-T::one()).min(T::one())
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &CoincidenceTable<T>) -> T {
        self.cells
            .iter()
            .zip(other.cells.iter())
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }
}

/// Raw coincidence counts for one run of `trials` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountRecord {
    pub n_vv: u64,
    pub n_vh: u64,
    pub n_hv: u64,
    pub n_hh: u64,
    pub trials: u64,
    pub seed: u64,
}

impl CountRecord {
    /// Validating constructor: counts must sum to `trials`, which must be positive.
    pub fn new(counts: [u64; 4], trials: u64, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("trials must be positive"));
        }
        let total = counts.iter().try_fold(0u64, |a, &b| a.checked_add(b));
        if total != Some(trials) {
            return Err(Error::domain(format!(
                "counts {counts:?} do not sum to {trials} trials"
            )));
        }
        let [n_vv, n_vh, n_hv, n_hh] = counts;
        Ok(CountRecord {
            n_vv,
            n_vh,
            n_hv,
            n_hh,
            trials,
            seed,
        })
    }

    pub fn counts(&self) -> [u64; 4] {
        [self.n_vv, self.n_vh, self.n_hv, self.n_hh]
    }

    pub fn get(&self, port1: Port, port2: Port) -> u64 {
        self.counts()[2 * port1.index() + port2.index()]
    }
}

/// Empirical frequencies `count / trials`.
pub fn table_from_counts<T: Scalar>(c: &CountRecord) -> Result<CoincidenceTable<T>> {
    if c.trials == 0 {
        return Err(Error::domain("trials must be positive"));
    }
    if c.counts().iter().sum::<u64>() != c.trials {
        return Err(Error::domain("counts do not sum to trials"));
    }
    let n = T::from_u64(c.trials).expect("trial count representable");
    let cells = c
        .counts()
        .map(|k| T::from_u64(k).expect("count representable") / n);
    Ok(CoincidenceTable { cells })
}
