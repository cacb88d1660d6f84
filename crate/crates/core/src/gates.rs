//! Gate set and decomposition identities.
//!
//! The primitive matrices:
//!
//! ```text
//! Z(phi)  = diag(1, e^{i phi})                      Xrot(phi) = exp(-i phi sigma_x)
//! CZ(phi) = diag(1, 1, 1, e^{-i 2 phi})             Yrot(th)  = exp(-i th sigma_y / 2)
//! ZZ(th)  = exp(-i th sigma_z ⊗ sigma_z)            Xflip(a)  = exp(+i a sigma_x)
//! ZZZ(b)  = exp(-i b sigma_z ⊗ sigma_z ⊗ sigma_z)
//! ZZ_A    = exp(+i pi sigma_z ⊗ sigma_z / 4),  ZZ_B = exp(-i pi sigma_z ⊗ sigma_z / 4)
//! U_{Sz^2}(th) = exp(-i th/2 sum_{i<j} sigma_z_i sigma_z_j)
//! ```
//!
//! `ZZ` factors into a c-phase plus single-qubit z rotations, and `ZZZ` is
//! realized either with the collective gate or with two-qubit conjugation;
//! both constructions are exact and checked against the diagonal closed forms.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::error::{Error, Result};
use crate::hilbert::{embed_on_sites, Operator, SpaceShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Zrot,
    Xrot,
    Yrot,
    Cz,
    Zz,
    ZzA,
    ZzB,
    Zzz,
    CollectiveSz2,
    Xflip,
}

/// How a ZZZ interaction is realized inside a digital schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ZzzMode {
    /// One three-qubit diagonal gate.
    #[default]
    Direct,
    /// Collective-gate conjugation of a single-qubit x flip.
    Collective,
    /// ZZ_A/ZZ_B conjugation of a two-qubit ZZ gate.
    TwoQubit,
}

impl GateKind {
    /// Number of target sites; `None` for the site-set collective gate.
    pub fn fixed_arity(&self) -> Option<usize> {
        match self {
            GateKind::Zrot | GateKind::Xrot | GateKind::Yrot | GateKind::Xflip => Some(1),
            GateKind::Cz | GateKind::Zz | GateKind::ZzA | GateKind::ZzB => Some(2),
            GateKind::Zzz => Some(3),
            GateKind::CollectiveSz2 => None,
        }
    }

    /// Diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            GateKind::Zrot
                | GateKind::Cz
                | GateKind::Zz
                | GateKind::ZzA
                | GateKind::ZzB
                | GateKind::Zzz
                | GateKind::CollectiveSz2
        )
    }

    pub fn token(&self) -> &'static str {
        match self {
            GateKind::Zrot => "Zrot",
            GateKind::Xrot => "Xrot",
            GateKind::Yrot => "Yrot",
            GateKind::Cz => "CZ",
            GateKind::Zz => "ZZ",
            GateKind::ZzA => "ZZ_A",
            GateKind::ZzB => "ZZ_B",
            GateKind::Zzz => "ZZZ",
            GateKind::CollectiveSz2 => "CollectiveSz2",
            GateKind::Xflip => "Xflip",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        Some(match s {
            "Zrot" => GateKind::Zrot,
            "Xrot" => GateKind::Xrot,
            "Yrot" => GateKind::Yrot,
            "CZ" => GateKind::Cz,
            "ZZ" => GateKind::Zz,
            "ZZ_A" => GateKind::ZzA,
            "ZZ_B" => GateKind::ZzB,
            "ZZZ" => GateKind::Zzz,
            "CollectiveSz2" => GateKind::CollectiveSz2,
            "Xflip" => GateKind::Xflip,
            _ => return None,
        })
    }
}

/// One gate record: kind, 1-based target sites, angle in radians.
///
/// `ZZ_A`/`ZZ_B` carry their angle implicitly; the field is kept at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub sites: Vec<usize>,
    pub angle: f64,
}

impl Gate {
    pub fn new(kind: GateKind, sites: Vec<usize>, angle: f64) -> Self {
        Self { kind, sites, angle }
    }
}

/// Ordered gate list over a fixed shape; list order is application order, so
/// `evaluate` multiplies right-to-left.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSequence {
    shape: SpaceShape,
    gates: Vec<Gate>,
}

impl GateSequence {
    pub fn new(shape: SpaceShape) -> Self {
        Self {
            shape,
            gates: Vec::new(),
        }
    }

    pub fn shape(&self) -> SpaceShape {
        self.shape
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(arity) = gate.kind.fixed_arity() {
            if gate.sites.len() != arity {
                return Err(Error::GateArity {
                    kind: gate.kind.token(),
                    expected: match arity {
                        1 => "1 site",
                        2 => "2 sites",
                        _ => "3 sites",
                    },
                    got: gate.sites.len(),
                });
            }
        } else if gate.sites.len() < 2 {
            return Err(Error::TooFewSites(gate.sites.len()));
        }
        for (pos, &s) in gate.sites.iter().enumerate() {
            self.shape.check_site(s)?;
            if gate.sites[..pos].contains(&s) {
                return Err(Error::DuplicateSite(s));
            }
        }
        if !gate.angle.is_finite() {
            return Err(Error::NonFinite {
                what: "gate angle",
                value: gate.angle,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Full-space unitary of the sequence.
    pub fn evaluate(&self) -> Result<Operator> {
        let mut u = Operator::identity(self.shape);
        for gate in &self.gates {
            let local = local_matrix(gate.kind, gate.angle, gate.sites.len());
            let g = embed_on_sites(&local, &gate.sites, self.shape)?;
            u = &g * &u;
        }
        Ok(u)
    }

    /// Line-oriented text form: `<kind> <site list> <angle>` per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(g.kind.token());
            for s in &g.sites {
                out.push_str(&format!(" {s}"));
            }
            out.push_str(&format!(" {}\n", g.angle));
        }
        out
    }

    pub fn parse(text: &str, shape: SpaceShape) -> Result<Self> {
        let mut seq = GateSequence::new(shape);
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 3 {
                return Err(Error::GateParse {
                    line: idx + 1,
                    reason: "expected `<kind> <site list> <angle>`".into(),
                });
            }
            let kind = GateKind::from_token(fields[0]).ok_or_else(|| Error::GateParse {
                line: idx + 1,
                reason: format!("unknown gate kind `{}`", fields[0]),
            })?;
            let sites = fields[1..fields.len() - 1]
                .iter()
                .map(|f| {
                    f.parse::<usize>().map_err(|_| Error::GateParse {
                        line: idx + 1,
                        reason: format!("bad site index `{f}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let angle = fields[fields.len() - 1]
                .parse::<f64>()
                .map_err(|_| Error::GateParse {
                    line: idx + 1,
                    reason: format!("bad angle `{}`", fields[fields.len() - 1]),
                })?;
            seq.push(Gate::new(kind, sites, angle))?;
        }
        Ok(seq)
    }
}

/// Local matrix of a gate kind; `n_sites` only matters for the collective gate.
pub fn local_matrix(kind: GateKind, angle: f64, n_sites: usize) -> Array2<C64> {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    match kind {
        GateKind::Zrot => {
            ndarray::array![[one, zero], [zero, C64::from_polar(1.0, angle)]]
        }
        GateKind::Xrot => {
            let (c, s) = (angle.cos(), angle.sin());
            ndarray::array![
                [C64::new(c, 0.0), C64::new(0.0, -s)],
                [C64::new(0.0, -s), C64::new(c, 0.0)]
            ]
        }
        GateKind::Yrot => {
            let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
            ndarray::array![
                [C64::new(c, 0.0), C64::new(-s, 0.0)],
                [C64::new(s, 0.0), C64::new(c, 0.0)]
            ]
        }
        GateKind::Xflip => {
            let (c, s) = (angle.cos(), angle.sin());
            ndarray::array![
                [C64::new(c, 0.0), C64::new(0.0, s)],
                [C64::new(0.0, s), C64::new(c, 0.0)]
            ]
        }
        GateKind::Cz => {
            let mut m = Array2::eye(4);
            m[[3, 3]] = C64::from_polar(1.0, -2.0 * angle);
            m
        }
        GateKind::Zz => zz_diagonal(angle, 2),
        GateKind::ZzA => zz_diagonal(-FRAC_PI_4, 2),
        GateKind::ZzB => zz_diagonal(FRAC_PI_4, 2),
        GateKind::Zzz => zz_diagonal(angle, 3),
        GateKind::CollectiveSz2 => collective_diagonal(angle, n_sites),
    }
}

/// `exp(-i angle sigma_z^{⊗k})`: phase `e^{-i angle p}` with `p` the product
/// of sigma_z eigenvalues of the basis string.
fn zz_diagonal(angle: f64, k: usize) -> Array2<C64> {
    let d = 1usize << k;
    let mut m = Array2::zeros((d, d));
    for b in 0..d {
        let parity = if (b as u32).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        m[[b, b]] = C64::from_polar(1.0, -angle * parity);
    }
    m
}

/// `exp(-i angle/2 sum_{i<j} sigma_z_i sigma_z_j)` over `k` qubits.
fn collective_diagonal(angle: f64, k: usize) -> Array2<C64> {
    let d = 1usize << k;
    let mut m = Array2::zeros((d, d));
    for b in 0..d {
        // sum over pairs of z_i z_j with z = +1 for bit 0
        let ups = k as i64 - 2 * (b as u32).count_ones() as i64; // sum of z_i
        let pair_sum = (ups * ups - k as i64) as f64 / 2.0;
        m[[b, b]] = C64::from_polar(1.0, -angle / 2.0 * pair_sum);
    }
    m
}

/// `Z(phi) = diag(1, e^{i phi})` on one qubit.
pub fn z_rotation(phi: f64) -> Operator {
    Operator::from_entries(SpaceShape::qubits(1), local_matrix(GateKind::Zrot, phi, 1)).unwrap()
}

/// `CZ(phi) = diag(1, 1, 1, e^{-i 2 phi})` on two qubits.
pub fn cz_gate(phi: f64) -> Operator {
    Operator::from_entries(SpaceShape::qubits(2), local_matrix(GateKind::Cz, phi, 2)).unwrap()
}

/// `ZZ(theta) = exp(-i theta sigma_z ⊗ sigma_z)`.
pub fn zz_gate(theta: f64) -> Operator {
    Operator::from_entries(SpaceShape::qubits(2), zz_diagonal(theta, 2)).unwrap()
}

/// `ZZZ(beta) = exp(-i beta sigma_z ⊗ sigma_z ⊗ sigma_z)`.
pub fn zzz_gate(beta: f64) -> Operator {
    Operator::from_entries(SpaceShape::qubits(3), zz_diagonal(beta, 3)).unwrap()
}

/// Collective phase gate over `n_sites` qubits.
pub fn collective_sz2(theta: f64, n_sites: usize) -> Result<Operator> {
    if n_sites < 2 {
        return Err(Error::TooFewSites(n_sites));
    }
    Operator::from_entries(
        SpaceShape::qubits(n_sites),
        collective_diagonal(theta, n_sites),
    )
}

/// ZZ from a c-phase: `ZZ(theta) = (Z1(phi) ⊗ Z2(phi)) CZ(phi)` with
/// `phi = 2 theta`, up to the global phase `e^{i theta}`.
pub fn zz_via_cz(theta: f64) -> GateSequence {
    let phi = 2.0 * theta;
    let mut seq = GateSequence::new(SpaceShape::qubits(2));
    seq.push(Gate::new(GateKind::Cz, vec![1, 2], phi)).unwrap();
    seq.push(Gate::new(GateKind::Zrot, vec![1], phi)).unwrap();
    seq.push(Gate::new(GateKind::Zrot, vec![2], phi)).unwrap();
    seq
}

/// ZZZ via the collective gate: conjugating `X(alpha) = exp(+i alpha sigma_x)`
/// on the last qubit by `R_{Y,-pi/2} U_{Sz^2}(pi/2)` maps its generator onto
/// `-sigma_z sigma_z sigma_z`, so the sequence equals `ZZZ(alpha)` exactly.
pub fn zzz_via_collective(alpha: f64) -> GateSequence {
    zzz_collective_on([1, 2, 3], alpha, SpaceShape::qubits(3))
}

pub(crate) fn zzz_collective_on(sites: [usize; 3], alpha: f64, shape: SpaceShape) -> GateSequence {
    let [j, k, l] = sites;
    let mut seq = GateSequence::new(shape);
    seq.push(Gate::new(GateKind::Yrot, vec![l], FRAC_PI_2)).unwrap();
    seq.push(Gate::new(GateKind::CollectiveSz2, vec![j, k, l], -FRAC_PI_2))
        .unwrap();
    seq.push(Gate::new(GateKind::Xflip, vec![l], alpha)).unwrap();
    seq.push(Gate::new(GateKind::CollectiveSz2, vec![j, k, l], FRAC_PI_2))
        .unwrap();
    seq.push(Gate::new(GateKind::Yrot, vec![l], -FRAC_PI_2)).unwrap();
    seq
}

/// ZZZ via two-qubit gates: `V = Xrot(pi/4) ZZ_A R_{Y,-pi/2}` on the middle
/// qubit / trailing pair maps `sigma_z_k` to `sigma_z_k sigma_z_l`, so
/// `V ZZ_{jk}(alpha) V† = ZZZ(alpha)` exactly.
pub fn zzz_via_two_qubit(alpha: f64) -> GateSequence {
    zzz_two_qubit_on([1, 2, 3], alpha, SpaceShape::qubits(3))
}

pub(crate) fn zzz_two_qubit_on(sites: [usize; 3], alpha: f64, shape: SpaceShape) -> GateSequence {
    let [j, k, l] = sites;
    let mut seq = GateSequence::new(shape);
    // V†
    seq.push(Gate::new(GateKind::Xrot, vec![k], -FRAC_PI_4)).unwrap();
    seq.push(Gate::new(GateKind::ZzB, vec![k, l], 0.0)).unwrap();
    seq.push(Gate::new(GateKind::Yrot, vec![k], FRAC_PI_2)).unwrap();
    // angle-carrying pair gate
    seq.push(Gate::new(GateKind::Zz, vec![j, k], alpha)).unwrap();
    // V
    seq.push(Gate::new(GateKind::Yrot, vec![k], -FRAC_PI_2)).unwrap();
    seq.push(Gate::new(GateKind::ZzA, vec![k, l], 0.0)).unwrap();
    seq.push(Gate::new(GateKind::Xrot, vec![k], FRAC_PI_4)).unwrap();
    seq
}

/// Append a logical ZZZ gate in the chosen realization.
pub fn push_zzz(
    seq: &mut GateSequence,
    sites: [usize; 3],
    alpha: f64,
    mode: ZzzMode,
) -> Result<()> {
    match mode {
        ZzzMode::Direct => seq.push(Gate::new(GateKind::Zzz, sites.to_vec(), alpha)),
        ZzzMode::Collective => {
            for g in zzz_collective_on(sites, alpha, seq.shape()).gates {
                seq.push(g)?;
            }
            Ok(())
        }
        ZzzMode::TwoQubit => {
            for g in zzz_two_qubit_on(sites, alpha, seq.shape()).gates {
                seq.push(g)?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{expm_hermitian, pauli, Operator, PauliAxis};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn identity_distance(op: &Operator) -> f64 {
        (op - &Operator::identity(op.shape())).norm_fro()
    }

    /// Deterministic angle sweep standing in for "random theta".
    fn angle_sweep(count: usize) -> impl Iterator<Item = f64> {
        (0..count).map(move |k| 2.0 * PI * (k as f64 + 0.37) / count as f64)
    }

    #[test]
    fn z_rotation_at_zero_is_identity() {
        assert_abs_diff_eq!(identity_distance(&z_rotation(0.0)), 0.0);
    }

    #[test]
    fn cz_corner_entry() {
        let phi = 0.83;
        let cz = cz_gate(phi);
        let expect = C64::from_polar(1.0, -2.0 * phi);
        assert!((cz.entries()[[3, 3]] - expect).norm() < 1e-15);
        // standard c-phase at phi = pi/2
        let std_cz = cz_gate(PI / 2.0);
        let diag = Operator::from_real_diagonal(std_cz.shape(), &[1.0, 1.0, 1.0, -1.0]).unwrap();
        assert!((&std_cz - &diag).norm_fro() < 1e-15);
    }

    #[test]
    fn zz_gate_diagonal_form() {
        assert_abs_diff_eq!(identity_distance(&zz_gate(0.0)), 0.0);
        let th = 0.41;
        let zz = zz_gate(th);
        let m = C64::from_polar(1.0, -th);
        let p = C64::from_polar(1.0, th);
        for (i, want) in [m, p, p, m].iter().enumerate() {
            assert!((zz.entries()[[i, i]] - want).norm() < 1e-15);
        }
        // dual route: matches the matrix exponential of sz ⊗ sz
        let shape = SpaceShape::qubits(2);
        let gen = &pauli(PauliAxis::Z, 1, shape).unwrap() * &pauli(PauliAxis::Z, 2, shape).unwrap();
        let via_expm = expm_hermitian(&gen, th).unwrap();
        assert!((&zz - &via_expm).norm_fro() < 1e-12);
    }

    /// |101> has sigma_z parity (+1): entry e^{-i beta}.
    #[test]
    fn zzz_parity_of_101() {
        let beta = 1.3;
        let z = zzz_gate(beta);
        let idx = 0b101;
        assert!((z.entries()[[idx, idx]] - C64::from_polar(1.0, -beta)).norm() < 1e-15);
        let shape = SpaceShape::qubits(3);
        let gen = &(&pauli(PauliAxis::Z, 1, shape).unwrap()
            * &pauli(PauliAxis::Z, 2, shape).unwrap())
            * &pauli(PauliAxis::Z, 3, shape).unwrap();
        let via_expm = expm_hermitian(&gen, beta).unwrap();
        assert!((&z - &via_expm).norm_fro() < 1e-12);
    }

    #[test]
    fn zz_from_cz_identity() {
        assert!(identity_distance(&zz_via_cz(0.0).evaluate().unwrap()) < 1e-15);

        // theta = pi/4 by hand: diag(1, i, i, 1) = e^{i pi/4} ZZ(pi/4)
        let seq = zz_via_cz(PI / 4.0);
        let u = seq.evaluate().unwrap();
        let i_unit = C64::new(0.0, 1.0);
        let expect =
            Operator::from_diagonal(u.shape(), &[C64::new(1.0, 0.0), i_unit, i_unit, C64::new(1.0, 0.0)])
                .unwrap();
        assert!((&u - &expect).norm_fro() < 1e-14);
        let global = C64::from_polar(1.0, PI / 4.0);
        assert!((&u - &zz_gate(PI / 4.0).scaled(global)).norm_fro() < 1e-14);

        for th in angle_sweep(100) {
            let d = zz_via_cz(th).evaluate().unwrap().phase_distance(&zz_gate(th));
            assert!(d < 1e-12, "theta = {th}: distance {d}");
        }
    }

    #[test]
    fn collective_two_sites_is_zz() {
        let th = 0.93;
        let c = collective_sz2(th, 2).unwrap();
        assert!((&c - &zz_gate(th / 2.0)).norm_fro() < 1e-15);
        assert!(identity_distance(&collective_sz2(0.0, 3).unwrap()) < 1e-15);
        assert!(matches!(collective_sz2(1.0, 1), Err(Error::TooFewSites(1))));
    }

    /// Three sites, |000>: three aligned pairs give e^{-i 3 theta / 2}.
    #[test]
    fn collective_three_sites_top_entry() {
        let th = 0.57;
        let c = collective_sz2(th, 3).unwrap();
        assert!((c.entries()[[0, 0]] - C64::from_polar(1.0, -1.5 * th)).norm() < 1e-15);
        // dual route against the summed-generator exponential
        let shape = SpaceShape::qubits(3);
        let mut gen = Operator::zeros(shape);
        for i in 1..=3usize {
            for j in i + 1..=3 {
                gen = &gen
                    + &(&pauli(PauliAxis::Z, i, shape).unwrap()
                        * &pauli(PauliAxis::Z, j, shape).unwrap());
            }
        }
        let via_expm = expm_hermitian(&gen, th / 2.0).unwrap();
        assert!((&c - &via_expm).norm_fro() < 1e-12);
    }

    #[test]
    fn zzz_via_collective_matches_oracle() {
        assert!(
            zzz_via_collective(0.0)
                .evaluate()
                .unwrap()
                .phase_distance(&Operator::identity(SpaceShape::qubits(3)))
                < 1e-12
        );
        for a in angle_sweep(100) {
            let d = zzz_via_collective(a)
                .evaluate()
                .unwrap()
                .phase_distance(&zzz_gate(a));
            assert!(d < 1e-10, "alpha = {a}: distance {d}");
        }
        // diagonal phase pattern at alpha = pi/4 follows the parity of zzz
        let u = zzz_via_collective(PI / 4.0).evaluate().unwrap();
        let oracle = zzz_gate(PI / 4.0);
        let ratio = u.entries()[[0, 0]] / oracle.entries()[[0, 0]];
        for i in 0..8 {
            assert!(
                (u.entries()[[i, i]] - ratio * oracle.entries()[[i, i]]).norm() < 1e-12,
                "diagonal {i} off pattern"
            );
        }
    }

    #[test]
    fn zzz_via_two_qubit_matches_oracle() {
        assert!(
            zzz_via_two_qubit(0.0)
                .evaluate()
                .unwrap()
                .phase_distance(&Operator::identity(SpaceShape::qubits(3)))
                < 1e-12
        );
        for a in angle_sweep(100) {
            let d = zzz_via_two_qubit(a)
                .evaluate()
                .unwrap()
                .phase_distance(&zzz_gate(a));
            assert!(d < 1e-10, "alpha = {a}: distance {d}");
        }
    }

    #[test]
    fn zz_a_and_zz_b_are_inverses() {
        let shape = SpaceShape::qubits(2);
        let mut seq = GateSequence::new(shape);
        seq.push(Gate::new(GateKind::ZzA, vec![1, 2], 0.0)).unwrap();
        seq.push(Gate::new(GateKind::ZzB, vec![1, 2], 0.0)).unwrap();
        assert!(identity_distance(&seq.evaluate().unwrap()) < 1e-15);
    }

    #[test]
    fn every_kind_evaluates_unitary() {
        let shape = SpaceShape::qubits(3);
        let gates = [
            Gate::new(GateKind::Zrot, vec![1], 0.77),
            Gate::new(GateKind::Xrot, vec![2], -1.3),
            Gate::new(GateKind::Yrot, vec![3], 2.4),
            Gate::new(GateKind::Xflip, vec![1], 0.9),
            Gate::new(GateKind::Cz, vec![1, 3], 1.1),
            Gate::new(GateKind::Zz, vec![2, 3], -0.6),
            Gate::new(GateKind::ZzA, vec![1, 2], 0.0),
            Gate::new(GateKind::ZzB, vec![2, 1], 0.0),
            Gate::new(GateKind::Zzz, vec![1, 2, 3], 1.9),
            Gate::new(GateKind::CollectiveSz2, vec![1, 2, 3], 0.35),
        ];
        for g in gates {
            let mut seq = GateSequence::new(shape);
            seq.push(g.clone()).unwrap();
            let u = seq.evaluate().unwrap();
            assert!(u.is_unitary(1e-10), "{:?} not unitary", g.kind);
        }
    }

    /// Diagonal gates commute: a permuted sequence evaluates identically.
    #[test]
    fn diagonal_sequence_permutation_invariant() {
        let shape = SpaceShape::qubits(3);
        let gates = vec![
            Gate::new(GateKind::Zrot, vec![2], 0.31),
            Gate::new(GateKind::Cz, vec![1, 3], -0.8),
            Gate::new(GateKind::Zz, vec![1, 2], 1.7),
            Gate::new(GateKind::Zzz, vec![1, 2, 3], 0.45),
            Gate::new(GateKind::CollectiveSz2, vec![2, 3], 2.2),
        ];
        let mut fwd = GateSequence::new(shape);
        let mut rev = GateSequence::new(shape);
        for g in &gates {
            fwd.push(g.clone()).unwrap();
        }
        for g in gates.iter().rev() {
            rev.push(g.clone()).unwrap();
        }
        let d = (&fwd.evaluate().unwrap() - &rev.evaluate().unwrap()).norm_fro();
        assert!(d < 1e-12);
    }

    #[test]
    fn sequence_validation() {
        let shape = SpaceShape::qubits(2);
        let mut seq = GateSequence::new(shape);
        assert!(matches!(
            seq.push(Gate::new(GateKind::Zz, vec![1], 0.1)),
            Err(Error::GateArity { .. })
        ));
        assert!(matches!(
            seq.push(Gate::new(GateKind::Zz, vec![1, 1], 0.1)),
            Err(Error::DuplicateSite(1))
        ));
        assert!(matches!(
            seq.push(Gate::new(GateKind::Zz, vec![1, 3], 0.1)),
            Err(Error::SiteOutOfRange { site: 3, .. })
        ));
        assert!(matches!(
            seq.push(Gate::new(GateKind::CollectiveSz2, vec![1], 0.1)),
            Err(Error::TooFewSites(1))
        ));
        assert!(matches!(
            seq.push(Gate::new(GateKind::Xrot, vec![1], f64::NAN)),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let seq = zzz_via_two_qubit(0.625);
        let text = seq.to_text();
        let parsed = GateSequence::parse(&text, seq.shape()).unwrap();
        assert_eq!(seq, parsed);
        assert!(text.lines().all(|l| !l.trim().is_empty()));

        assert!(matches!(
            GateSequence::parse("BOGUS 1 0.5", SpaceShape::qubits(1)),
            Err(Error::GateParse { line: 1, .. })
        ));
        assert!(matches!(
            GateSequence::parse("Zrot 1", SpaceShape::qubits(1)),
            Err(Error::GateParse { .. })
        ));
    }
}
