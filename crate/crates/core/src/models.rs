//! Closed-form prediction engines.
//!
//! The classical engine treats each analyzer as a Malus-law two-port device
//! acting on a source that emits one of two anticorrelated pairs. The quantum
//! engine evaluates the anticorrelated two-photon superposition, both through
//! its closed form and through direct projection of the state vector.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{Angle, CoincidenceTable, Port, SourceConfig};

/// Relative sign between the two terms of the anticorrelated superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Scalar>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    ClassicalMalus,
    QuantumSuperposition(Sign),
}

impl ModelKind {
    /// The rotationally invariant quantum model.
    pub const QUANTUM_MINUS: ModelKind = ModelKind::QuantumSuperposition(Sign::Minus);
    pub const QUANTUM_PLUS: ModelKind = ModelKind::QuantumSuperposition(Sign::Plus);

    /// Stable text tag used by the CLI and in output files.
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::ClassicalMalus => "classical",
            ModelKind::QuantumSuperposition(Sign::Minus) => "quantum-minus",
            ModelKind::QuantumSuperposition(Sign::Plus) => "quantum-plus",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(ModelKind::ClassicalMalus),
            "quantum-minus" | "quantum" => Ok(ModelKind::QUANTUM_MINUS),
            "quantum-plus" => Ok(ModelKind::QUANTUM_PLUS),
            other => Err(Error::domain(format!("unknown model `{other}`"))),
        }
    }
}

/// Pure two-photon polarization state, amplitudes in VV, VH, HV, HH order
/// (channel-1 port first).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState<T> {
    amplitudes: [Complex<T>; 4],
}

impl<T: Scalar> TwoQubitState<T> {
    /// Normalized state; fails if the squared magnitudes do not sum to one.
    pub fn new(amplitudes: [Complex<T>; 4]) -> Result<Self> {
        let s = TwoQubitState { amplitudes };
        s.check_normalized()?;
        Ok(s)
    }

    /// No normalization check; [`born_table`] will reject the state if needed.
    pub fn from_amplitudes_unchecked(amplitudes: [Complex<T>; 4]) -> Self {
        TwoQubitState { amplitudes }
    }

    /// `(|V⟩|H⟩ ± |H⟩|V⟩) / √2`: channel 1 vertical with channel 2 horizontal,
    /// superposed with the exchange.
    pub fn anticorrelated(sign: Sign) -> Self {
        let r = T::FRAC_1_SQRT_2();
        let z = Complex::new(T::zero(), T::zero());
        TwoQubitState {
            amplitudes: [
                z,
                Complex::new(r, T::zero()),
                Complex::new(sign.value::<T>() * r, T::zero()),
                z,
            ],
        }
    }

    pub fn amplitudes(&self) -> [Complex<T>; 4] {
        self.amplitudes
    }

    pub fn amplitude(&self, port1: Port, port2: Port) -> Complex<T> {
        self.amplitudes[2 * port1.index() + port2.index()]
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - T::one()).abs() > T::identity_tolerance() {
            return Err(Error::domain(format!("state norm² is {n}, expected 1")));
        }
        Ok(())
    }
}

fn cos2<T: Scalar>(x: T) -> T {
    let c = x.cos();
    c * c
}

fn sin2<T: Scalar>(x: T) -> T {
    let s = x.sin();
    s * s
}

/// Classical two-mode Malus-law table.
///
/// Mode `HV` (weight `w`) sends a pulse polarized along the source axis into
/// channel 1 and a perpendicular one into channel 2; mode `VH` swaps them.
/// Each analyzer routes its pulse to port V with probability cos² of the angle
/// between the pulse polarization and the analyzer axis.
pub fn classical_table<T: Scalar>(
    theta1: Angle<T>,
    theta2: Angle<T>,
    src: &SourceConfig<T>,
) -> CoincidenceTable<T> {
    let a = theta1.relative_to(src.axis()).radians();
    let b = theta2.relative_to(src.axis()).radians();
    let w = src.mode_weight();
    let wc = T::one() - w;
    let (ca, sa) = (cos2(a), sin2(a));
    let (cb, sb) = (cos2(b), sin2(b));
    CoincidenceTable::from_cells([
        w * ca * sb + wc * sa * cb,
        w * ca * cb + wc * sa * sb,
        w * sa * sb + wc * ca * cb,
        w * sa * cb + wc * ca * sb,
    ])
}

/// Closed-form table of the anticorrelated superposition.
///
/// For the minus sign the cells depend on `θ1 − θ2` only:
/// `P_vv = P_hh = ½sin²(θ1 − θ2)`, `P_vh = P_hv = ½cos²(θ1 − θ2)`.
/// The plus sign replaces the difference by `θ1 + θ2`.
pub fn quantum_table_closed<T: Scalar>(
    theta1: Angle<T>,
    theta2: Angle<T>,
    sign: Sign,
) -> CoincidenceTable<T> {
    let d = match sign {
        Sign::Minus => theta1.radians() - theta2.radians(),
        Sign::Plus => theta1.radians() + theta2.radians(),
    };
    let half = T::lit(0.5);
    let same = half * sin2(d);
    let cross = half * cos2(d);
    CoincidenceTable::from_cells([same, cross, cross, same])
}

/// Analyzer eigenvector for `port` at `theta` in the (v, h) basis.
fn analyzer_vector<T: Scalar>(theta: T, port: Port) -> [T; 2] {
    let (s, c) = theta.sin_cos();
    match port {
        Port::V => [c, s],
        Port::H => [-s, c],
    }
}

/// Born-rule table by explicit projection of `state` onto product analyzer
/// eigenstates.
pub fn born_table<T: Scalar>(
    state: &TwoQubitState<T>,
    theta1: Angle<T>,
    theta2: Angle<T>,
) -> Result<CoincidenceTable<T>> {
    state.check_normalized()?;
    let amps = state.amplitudes();
    let mut cells = [T::zero(); 4];
    for p1 in Port::ALL {
        let e1 = analyzer_vector(theta1.radians(), p1);
        for p2 in Port::ALL {
            let e2 = analyzer_vector(theta2.radians(), p2);
            let mut amp = Complex::new(T::zero(), T::zero());
            for k in 0..2 {
                for l in 0..2 {
                    amp = amp + amps[2 * k + l] * (e1[k] * e2[l]);
                }
            }
            cells[2 * p1.index() + p2.index()] = amp.norm_sqr();
        }
    }
    Ok(CoincidenceTable::from_cells(cells))
}

/// Table predicted by `model`. The source axis is subtracted from both
/// analyzer angles for every model; the mode weight only affects the
/// classical one.
pub fn predict_table<T: Scalar>(
    model: ModelKind,
    theta1: Angle<T>,
    theta2: Angle<T>,
    src: &SourceConfig<T>,
) -> CoincidenceTable<T> {
    match model {
        ModelKind::ClassicalMalus => classical_table(theta1, theta2, src),
        ModelKind::QuantumSuperposition(sign) => quantum_table_closed(
            theta1.relative_to(src.axis()),
            theta2.relative_to(src.axis()),
            sign,
        ),
    }
}

/// System correlation χ of `model` with the default source.
pub fn chi<T: Scalar>(theta1: Angle<T>, theta2: Angle<T>, model: ModelKind) -> T {
    chi_with_source(theta1, theta2, model, &SourceConfig::default())
}

pub fn chi_with_source<T: Scalar>(
    theta1: Angle<T>,
    theta2: Angle<T>,
    model: ModelKind,
    src: &SourceConfig<T>,
) -> T {
    predict_table(model, theta1, theta2, src).chi()
}

/// Fringe visibility `(max − min) / (max + min)` of a `P_vv` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visibility<T> {
    pub value: T,
    pub max: T,
    pub min: T,
    /// Set when `max + min` vanishes; `value` is then reported as zero.
    pub degenerate: bool,
}

impl<T: Scalar> Visibility<T> {
    pub fn from_extrema(max: T, min: T) -> Self {
        let total = max + min;
        if total <= T::identity_tolerance() {
            return Visibility {
                value: T::zero(),
                max,
                min,
                degenerate: true,
            };
        }
        Visibility {
            value: (max - min) / total,
            max,
            min,
            degenerate: false,
        }
    }

    /// Visibility of sampled curve values. `None` for an empty slice.
    pub fn of_samples(values: &[T]) -> Option<Self> {
        let first = *values.first()?;
        let (max, min) = values
            .iter()
            .fold((first, first), |(hi, lo), &v| (hi.max(v), lo.min(v)));
        Some(Self::from_extrema(max, min))
    }
}

/// Analytic visibility of `P_vv(θ1, ·)` as θ2 sweeps `[0, π)`, default source.
pub fn visibility<T: Scalar>(model: ModelKind, theta1: Angle<T>) -> Visibility<T> {
    visibility_with_source(model, theta1, &SourceConfig::default())
}

pub fn visibility_with_source<T: Scalar>(
    model: ModelKind,
    theta1: Angle<T>,
    src: &SourceConfig<T>,
) -> Visibility<T> {
    match model {
        ModelKind::ClassicalMalus => {
            // P_vv is affine in sin²(θ2 − φ), so the extremes sit at θ2 − φ ∈ {0, π/2}.
            let a = theta1.relative_to(src.axis()).radians();
            let w = src.mode_weight();
            let at_zero = (T::one() - w) * sin2(a);
            let at_right = w * cos2(a);
            Visibility::from_extrema(at_zero.max(at_right), at_zero.min(at_right))
        }
        ModelKind::QuantumSuperposition(_) => Visibility::from_extrema(T::lit(0.5), T::zero()),
    }
}

/// Visibility from a dense scan of `points` equally spaced θ2 values in `[0, π)`.
pub fn visibility_scan<T: Scalar>(
    model: ModelKind,
    theta1: Angle<T>,
    src: &SourceConfig<T>,
    points: usize,
) -> Result<Visibility<T>> {
    if points < 2 {
        return Err(Error::domain("visibility scan needs at least 2 points"));
    }
    let n = T::from_usize(points).expect("point count representable");
    let values: Vec<T> = (0..points)
        .map(|k| {
            let t2 = Angle::new(T::PI() * T::from_usize(k).unwrap() / n)?;
            Ok(predict_table(model, theta1, t2, src).p_vv())
        })
        .collect::<Result<_>>()?;
    Ok(Visibility::of_samples(&values).expect("non-empty scan"))
}
