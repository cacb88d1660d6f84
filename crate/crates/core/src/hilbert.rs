//! Dense complex operator and state algebra over a composite Hilbert space of
//! N qubits and an optional truncated bosonic mode.
//!
//! Basis ordering: qubit 1 is the most significant tensor factor, the bosonic
//! mode the least significant, so a basis state `|b1 b2 .. bn> ⊗ |m>` has
//! index `(b1 2^(n-1) + .. + bn) * fock_dim + m`. Bit value 0 is `|0>_z`, the
//! +1 eigenstate of `sigma_z` (the excited state); `sigma_plus = |0><1|`.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, SVD, UPLO};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tol;

/// Dimension structure of the composite space.
///
/// `fock_dim = 0` means no bosonic mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceShape {
    n_qubits: usize,
    fock_dim: usize,
}

impl SpaceShape {
    /// N qubits, no bosonic mode.
    pub fn qubits(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1, "need at least one qubit");
        Self {
            n_qubits,
            fock_dim: 0,
        }
    }

    /// N qubits plus one mode truncated to `fock_dim` number states.
    pub fn with_mode(n_qubits: usize, fock_dim: usize) -> Self {
        assert!(n_qubits >= 1, "need at least one qubit");
        Self { n_qubits, fock_dim }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn fock_dim(&self) -> usize {
        self.fock_dim
    }

    pub fn has_mode(&self) -> bool {
        self.fock_dim > 0
    }

    /// Dimension of the mode factor (1 when there is no mode).
    pub fn mode_dim(&self) -> usize {
        self.fock_dim.max(1)
    }

    pub fn total_dim(&self) -> usize {
        (1usize << self.n_qubits) * self.mode_dim()
    }

    /// Full-space index of `|bits> ⊗ |level>`; `bits` holds qubit 1 in the
    /// most significant of the low `n_qubits` bits.
    pub fn index_of(&self, qubit_bits: usize, fock_level: usize) -> usize {
        debug_assert!(qubit_bits < 1 << self.n_qubits);
        debug_assert!(fock_level < self.mode_dim());
        qubit_bits * self.mode_dim() + fock_level
    }

    pub fn qubit_bits(&self, index: usize) -> usize {
        index / self.mode_dim()
    }

    pub fn fock_level(&self, index: usize) -> usize {
        index % self.mode_dim()
    }

    /// Bit of `site` (1-based, site 1 most significant) in a qubit config.
    pub fn bit(&self, qubit_bits: usize, site: usize) -> usize {
        (qubit_bits >> (self.n_qubits - site)) & 1
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.n_qubits {
            return Err(Error::SiteOutOfRange {
                site,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    pub fn check_same(&self, other: &SpaceShape) -> Result<()> {
        if self != other {
            return Err(Error::ShapeMismatch {
                left: *self,
                right: *other,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for SpaceShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.has_mode() {
            write!(f, "{} qubit(s) x mode({})", self.n_qubits, self.fock_dim)
        } else {
            write!(f, "{} qubit(s)", self.n_qubits)
        }
    }
}

/// Dense operator over a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    shape: SpaceShape,
    entries: Array2<C64>,
}

impl Operator {
    pub fn from_entries(shape: SpaceShape, entries: Array2<C64>) -> Result<Self> {
        let d = shape.total_dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self { shape, entries })
    }

    pub fn zeros(shape: SpaceShape) -> Self {
        let d = shape.total_dim();
        Self {
            shape,
            entries: Array2::zeros((d, d)),
        }
    }

    pub fn identity(shape: SpaceShape) -> Self {
        let d = shape.total_dim();
        Self {
            shape,
            entries: Array2::eye(d),
        }
    }

    /// Diagonal operator from real eigenvalues in basis order.
    pub fn from_real_diagonal(shape: SpaceShape, diag: &[f64]) -> Result<Self> {
        let d = shape.total_dim();
        if diag.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: diag.len(),
            });
        }
        let mut m = Array2::zeros((d, d));
        for (i, &v) in diag.iter().enumerate() {
            m[[i, i]] = C64::new(v, 0.0);
        }
        Ok(Self { shape, entries: m })
    }

    /// Diagonal unitary from complex phases in basis order.
    pub fn from_diagonal(shape: SpaceShape, diag: &[C64]) -> Result<Self> {
        let d = shape.total_dim();
        if diag.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: diag.len(),
            });
        }
        let mut m = Array2::zeros((d, d));
        for (i, &v) in diag.iter().enumerate() {
            m[[i, i]] = v;
        }
        Ok(Self { shape, entries: m })
    }

    pub fn shape(&self) -> SpaceShape {
        self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.total_dim()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<C64> {
        self.entries
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self {
            shape: self.shape,
            entries: self.entries.t().mapv(|z| z.conj()),
        }
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    pub fn scaled(&self, z: C64) -> Self {
        Self {
            shape: self.shape,
            entries: self.entries.mapv(|e| e * z),
        }
    }

    pub fn norm_fro(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm (largest singular value).
    pub fn norm_spectral(&self) -> f64 {
        let (_, sv, _) = self
            .entries
            .svd(false, false)
            .expect("SVD of a finite dense matrix");
        sv.iter().cloned().fold(0.0, f64::max)
    }

    /// Induced infinity norm (max row absolute sum); upper-bounds the
    /// spectral norm and is exact for diagonal matrices.
    pub fn norm_inf(&self) -> f64 {
        self.entries
            .rows()
            .into_iter()
            .map(|row| row.iter().map(|z| z.norm()).sum())
            .fold(0.0, f64::max)
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        assert_eq!(self.shape, other.shape, "commutator shape mismatch");
        Self {
            shape: self.shape,
            entries: self.entries.dot(&other.entries) - other.entries.dot(&self.entries),
        }
    }

    /// Deviation from Hermitian, `max |A - A†|` over entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                dev = dev.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        dev
    }

    /// Hermitian within `tol`, relative to the Frobenius norm.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol * self.norm_fro().max(1.0)
    }

    /// Unitary within `tol`: `|U†U - I|_F <= tol * sqrt(dim)`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let d = self.dim();
        let gram = self.dagger().entries.dot(&self.entries);
        let mut dev2 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                dev2 += (gram[[i, j]] - expect).norm_sqr();
            }
        }
        dev2.sqrt() <= tol * (d as f64).sqrt()
    }

    /// Distance to `other` modulo a global phase:
    /// `min_gamma |U - e^{i gamma} V|_F`, with the minimizing
    /// `gamma = arg tr(V†U)`.
    pub fn phase_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.shape, other.shape, "phase_distance shape mismatch");
        let tr: C64 = other
            .entries
            .iter()
            .zip(self.entries.iter())
            .map(|(v, u)| v.conj() * u)
            .sum();
        let gamma = tr.arg();
        let phase = C64::from_polar(1.0, gamma);
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(u, v)| (u - phase * v).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.shape, rhs.shape, "operator add shape mismatch");
        Operator {
            shape: self.shape,
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl std::ops::Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.shape, rhs.shape, "operator sub shape mismatch");
        Operator {
            shape: self.shape,
            entries: &self.entries - &rhs.entries,
        }
    }
}

/// Matrix product.
impl std::ops::Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.shape, rhs.shape, "operator mul shape mismatch");
        Operator {
            shape: self.shape,
            entries: self.entries.dot(&rhs.entries),
        }
    }
}

impl std::ops::Mul<&Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scaled(C64::new(self, 0.0))
    }
}

/// Pauli axis for single-site embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Mode ladder direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Lower,
    Raise,
}

/// Spin excitation ladder direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinLadderKind {
    Plus,
    Minus,
}

fn pauli_2x2(axis: PauliAxis) -> Array2<C64> {
    let z = C64::new(0.0, 0.0);
    match axis {
        PauliAxis::X => ndarray::array![[z, C64::new(1.0, 0.0)], [C64::new(1.0, 0.0), z]],
        PauliAxis::Y => ndarray::array![[z, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), z]],
        PauliAxis::Z => ndarray::array![[C64::new(1.0, 0.0), z], [z, C64::new(-1.0, 0.0)]],
    }
}

/// Embed a `2^k x 2^k` matrix acting on the listed qubit sites (1-based,
/// `sites[0]` the most significant local bit), identity elsewhere.
pub fn embed_on_sites(local: &Array2<C64>, sites: &[usize], shape: SpaceShape) -> Result<Operator> {
    let k = sites.len();
    let ld = 1usize << k;
    if local.nrows() != ld || local.ncols() != ld {
        return Err(Error::DimensionMismatch {
            expected: ld,
            got: local.nrows().max(local.ncols()),
        });
    }
    for (pos, &s) in sites.iter().enumerate() {
        shape.check_site(s)?;
        if sites[..pos].contains(&s) {
            return Err(Error::DuplicateSite(s));
        }
    }
    let n = shape.n_qubits();
    let md = shape.mode_dim();
    let mut out = Operator::zeros(shape);
    for q in 0..1usize << n {
        let mut a = 0usize;
        for &s in sites {
            a = (a << 1) | shape.bit(q, s);
        }
        for b in 0..ld {
            let v = local[[a, b]];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            // replace the site bits of q with the bits of b
            let mut qj = q;
            for (pos, &s) in sites.iter().enumerate() {
                let bit = (b >> (k - 1 - pos)) & 1;
                let off = n - s;
                qj = (qj & !(1usize << off)) | (bit << off);
            }
            for m in 0..md {
                out.entries[[shape.index_of(q, m), shape.index_of(qj, m)]] = v;
            }
        }
    }
    Ok(out)
}

/// Pauli operator at `site`: identity everywhere except a 2x2 factor.
pub fn pauli(axis: PauliAxis, site: usize, shape: SpaceShape) -> Result<Operator> {
    shape.check_site(site)?;
    embed_on_sites(&pauli_2x2(axis), &[site], shape)
}

/// Truncated mode annihilation/creation operator: `<m-1|a|m> = sqrt(m)`.
pub fn ladder(kind: LadderKind, shape: SpaceShape) -> Result<Operator> {
    if shape.fock_dim() < 2 {
        return Err(Error::NoBosonicMode(shape.fock_dim()));
    }
    let md = shape.mode_dim();
    let mut out = Operator::zeros(shape);
    for q in 0..1usize << shape.n_qubits() {
        for m in 1..md {
            let v = C64::new((m as f64).sqrt(), 0.0);
            let (row, col) = match kind {
                LadderKind::Lower => (shape.index_of(q, m - 1), shape.index_of(q, m)),
                LadderKind::Raise => (shape.index_of(q, m), shape.index_of(q, m - 1)),
            };
            out.entries[[row, col]] = v;
        }
    }
    Ok(out)
}

/// Mode number operator `a†a` (diagonal in the Fock index).
pub fn number_operator(shape: SpaceShape) -> Result<Operator> {
    if shape.fock_dim() < 2 {
        return Err(Error::NoBosonicMode(shape.fock_dim()));
    }
    let d = shape.total_dim();
    let diag: Vec<f64> = (0..d).map(|i| shape.fock_level(i) as f64).collect();
    Operator::from_real_diagonal(shape, &diag)
}

/// Spin excitation operator `sigma± = (sigma_x ± i sigma_y)/2` at `site`.
///
/// With the basis convention here, `sigma_plus = |0><1|` raises the ground
/// state into the excited `|0>_z` state.
pub fn spin_ladder(kind: SpinLadderKind, site: usize, shape: SpaceShape) -> Result<Operator> {
    shape.check_site(site)?;
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let local = match kind {
        SpinLadderKind::Plus => ndarray::array![[z, one], [z, z]],
        SpinLadderKind::Minus => ndarray::array![[z, z], [one, z]],
    };
    embed_on_sites(&local, &[site], shape)
}

/// `U = exp(-i * scale * H)` for Hermitian `H`, by eigendecomposition.
pub fn expm_hermitian(h: &Operator, scale: f64) -> Result<Operator> {
    if !scale.is_finite() {
        return Err(Error::NonFinite {
            what: "expm scale",
            value: scale,
        });
    }
    let dev = h.hermitian_deviation();
    let tol = tol::HERMITIAN_TOL * h.norm_fro().max(1.0);
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: tol::HERMITIAN_TOL,
        });
    }
    let (vals, vecs) = h.entries.eigh(UPLO::Lower)?;
    let phases: Array1<C64> = vals.mapv(|l| C64::from_polar(1.0, -scale * l));
    // U = V diag(phases) V†
    let scaled = &vecs * &phases; // scales column j by phases[j]
    let u = scaled.dot(&vecs.t().mapv(|z| z.conj()));
    Ok(Operator {
        shape: h.shape,
        entries: u,
    })
}

/// Normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    shape: SpaceShape,
    amplitudes: Array1<C64>,
}

impl PureState {
    /// Computational basis state by full-space index.
    pub fn basis_state(shape: SpaceShape, index: usize) -> Result<Self> {
        let d = shape.total_dim();
        if index >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: index,
            });
        }
        let mut amplitudes = Array1::zeros(d);
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self { shape, amplitudes })
    }

    /// Build from raw amplitudes; normalizes.
    pub fn from_amplitudes(shape: SpaceShape, amplitudes: Array1<C64>) -> Result<Self> {
        let d = shape.total_dim();
        if amplitudes.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            shape,
            amplitudes: amplitudes.mapv(|z| z / norm),
        })
    }

    pub fn shape(&self) -> SpaceShape {
        self.shape
    }

    pub fn amplitudes(&self) -> &Array1<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.shape.check_same(&other.shape)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn to_density(&self) -> DensityMatrix {
        let d = self.shape.total_dim();
        let mut m = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                m[[i, j]] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        DensityMatrix {
            shape: self.shape,
            entries: m,
        }
    }
}

/// `U |psi>`.
pub fn apply(u: &Operator, psi: &PureState) -> Result<PureState> {
    u.shape.check_same(&psi.shape)?;
    Ok(PureState {
        shape: psi.shape,
        amplitudes: u.entries.dot(&psi.amplitudes),
    })
}

/// Hermitian unit-trace density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    shape: SpaceShape,
    pub(crate) entries: Array2<C64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &PureState) -> Self {
        psi.to_density()
    }

    /// Build from raw entries, checking Hermiticity and unit trace.
    pub fn from_entries(shape: SpaceShape, entries: Array2<C64>) -> Result<Self> {
        let d = shape.total_dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: entries.nrows().max(entries.ncols()),
            });
        }
        let rho = Self { shape, entries };
        let dev = rho.as_operator().hermitian_deviation();
        if dev > tol::STATE_NORM_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol::STATE_NORM_TOL,
            });
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > tol::STATE_NORM_TOL || tr.im.abs() > tol::STATE_NORM_TOL {
            return Err(Error::InvalidConfig(format!(
                "density matrix trace {} is not 1",
                tr
            )));
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(shape: SpaceShape, entries: Array2<C64>) -> Self {
        Self { shape, entries }
    }

    pub fn shape(&self) -> SpaceShape {
        self.shape
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn as_operator(&self) -> Operator {
        Operator {
            shape: self.shape,
            entries: self.entries.clone(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // tr(A A) for Hermitian A = sum |A_ij|^2
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let (vals, _) = self.entries.eigh(UPLO::Lower)?;
        Ok(vals.iter().cloned().fold(f64::INFINITY, f64::min))
    }

    /// `tr(rho * op)`.
    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        self.shape.check_same(&op.shape)?;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.entries.nrows() {
            for k in 0..self.entries.ncols() {
                acc += self.entries[[i, k]] * op.entries[[k, i]];
            }
        }
        Ok(acc)
    }

    /// Population of the top Fock level (truncation monitor).
    pub fn top_fock_population(&self) -> f64 {
        if !self.shape.has_mode() {
            return 0.0;
        }
        let top = self.shape.mode_dim() - 1;
        (0..self.shape.total_dim())
            .filter(|&i| self.shape.fock_level(i) == top)
            .map(|i| self.entries[[i, i]].re)
            .sum()
    }
}

/// `U rho U†`.
pub fn conjugate(u: &Operator, rho: &DensityMatrix) -> Result<DensityMatrix> {
    u.shape.check_same(&rho.shape)?;
    let m = u.entries.dot(&rho.entries).dot(&u.dagger().entries);
    Ok(DensityMatrix {
        shape: rho.shape,
        entries: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn assert_close(op: &Operator, expect: &Array2<C64>, tol: f64) {
        assert_eq!(op.entries().dim(), expect.dim());
        for ((i, j), v) in op.entries().indexed_iter() {
            assert!(
                (v - expect[[i, j]]).norm() <= tol,
                "entry ({i},{j}): {v} vs {}",
                expect[[i, j]]
            );
        }
    }

    #[test]
    fn pauli_z_is_diag_plus_minus() {
        let shape = SpaceShape::qubits(1);
        let sz = pauli(PauliAxis::Z, 1, shape).unwrap();
        assert_close(&sz, &array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]], 0.0);
        assert!(sz.is_hermitian(1e-12));
        assert!(sz.is_unitary(1e-12));
        assert_abs_diff_eq!(sz.trace().norm(), 0.0);
    }

    #[test]
    fn pauli_squares_to_identity() {
        let shape = SpaceShape::qubits(2);
        for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
            let p = pauli(axis, 1, shape).unwrap();
            assert_close(&(&p * &p), Operator::identity(shape).entries(), 1e-15);
        }
    }

    /// 4x4 Kronecker product worked by hand: sz ⊗ sz = diag(1, -1, -1, 1).
    #[test]
    fn pauli_z_product_two_qubits() {
        let shape = SpaceShape::qubits(2);
        let zz = &pauli(PauliAxis::Z, 1, shape).unwrap() * &pauli(PauliAxis::Z, 2, shape).unwrap();
        let expect = Operator::from_real_diagonal(shape, &[1.0, -1.0, -1.0, 1.0]).unwrap();
        assert_eq!(zz, expect);
    }

    #[test]
    fn pauli_site_out_of_range() {
        let shape = SpaceShape::qubits(2);
        assert!(matches!(
            pauli(PauliAxis::X, 3, shape),
            Err(Error::SiteOutOfRange { site: 3, .. })
        ));
        assert!(matches!(
            pauli(PauliAxis::X, 0, shape),
            Err(Error::SiteOutOfRange { site: 0, .. })
        ));
    }

    /// Embedding must match the explicit Kronecker composition bit for bit.
    #[test]
    fn embedding_matches_kron_composition() {
        let shape = SpaceShape::with_mode(3, 3);
        let sy = pauli_2x2(PauliAxis::Y);
        let id2 = Array2::eye(2);
        let id_mode = Array2::eye(3);
        let kron = ndarray::linalg::kron(
            &ndarray::linalg::kron(&ndarray::linalg::kron(&id2, &sy), &id2),
            &id_mode,
        );
        let emb = pauli(PauliAxis::Y, 2, shape).unwrap();
        assert_eq!(emb.entries(), &kron);
    }

    #[test]
    fn lower_on_two_level_mode() {
        let shape = SpaceShape::with_mode(1, 2);
        let a = ladder(LadderKind::Lower, shape).unwrap();
        // block diag over the qubit: [[0,1],[0,0]] on the mode factor
        let z = c(0., 0.);
        let one = c(1., 0.);
        let expect = array![
            [z, one, z, z],
            [z, z, z, z],
            [z, z, z, one],
            [z, z, z, z]
        ];
        assert_close(&a, &expect, 0.0);
    }

    #[test]
    fn raise_lower_is_number_operator() {
        let shape = SpaceShape::with_mode(1, 5);
        let a = ladder(LadderKind::Lower, shape).unwrap();
        let ad = ladder(LadderKind::Raise, shape).unwrap();
        let n = &ad * &a;
        assert!((&n - &number_operator(shape).unwrap()).norm_fro() < 1e-14);
        assert_eq!(ad, a.dagger());
    }

    /// Closed form sqrt(n): <2|a|3> = sqrt(3).
    #[test]
    fn ladder_matrix_element() {
        let shape = SpaceShape::with_mode(1, 4);
        let a = ladder(LadderKind::Lower, shape).unwrap();
        let i = shape.index_of(0, 2);
        let j = shape.index_of(0, 3);
        assert_abs_diff_eq!(a.entries()[[i, j]].re, 3f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn ladder_needs_mode() {
        assert!(matches!(
            ladder(LadderKind::Lower, SpaceShape::qubits(2)),
            Err(Error::NoBosonicMode(0))
        ));
        assert!(matches!(
            ladder(LadderKind::Lower, SpaceShape::with_mode(1, 1)),
            Err(Error::NoBosonicMode(1))
        ));
    }

    #[test]
    fn spin_plus_matrix() {
        let shape = SpaceShape::qubits(1);
        let sp = spin_ladder(SpinLadderKind::Plus, 1, shape).unwrap();
        assert_close(&sp, &array![[c(0., 0.), c(1., 0.)], [c(0., 0.), c(0., 0.)]], 0.0);
        // sigma± = (sigma_x ± i sigma_y)/2
        let sx = pauli(PauliAxis::X, 1, shape).unwrap();
        let sy = pauli(PauliAxis::Y, 1, shape).unwrap();
        let built = (&sx + &sy.scaled(c(0., 1.))).scaled(c(0.5, 0.));
        assert_close(&sp, built.entries(), 1e-15);
    }

    #[test]
    fn spin_ladder_anticommutator_and_nilpotency() {
        let shape = SpaceShape::qubits(2);
        let sp = spin_ladder(SpinLadderKind::Plus, 2, shape).unwrap();
        let sm = spin_ladder(SpinLadderKind::Minus, 2, shape).unwrap();
        let anti = &(&sp * &sm) + &(&sm * &sp);
        assert_close(&anti, Operator::identity(shape).entries(), 1e-15);
        assert_abs_diff_eq!((&sp * &sp).norm_fro(), 0.0);
    }

    #[test]
    fn expm_of_sigma_z() {
        let shape = SpaceShape::qubits(1);
        let sz = pauli(PauliAxis::Z, 1, shape).unwrap();
        let phi = 0.731;
        let u = expm_hermitian(&sz, phi).unwrap();
        let expect = array![
            [C64::from_polar(1.0, -phi), c(0., 0.)],
            [c(0., 0.), C64::from_polar(1.0, phi)]
        ];
        assert_close(&u, &expect, 1e-12);
    }

    #[test]
    fn expm_at_zero_scale_is_identity() {
        let shape = SpaceShape::qubits(2);
        let h = &pauli(PauliAxis::X, 1, shape).unwrap() + &pauli(PauliAxis::Z, 2, shape).unwrap();
        let u = expm_hermitian(&h, 0.0).unwrap();
        assert_close(&u, Operator::identity(shape).entries(), 1e-12);
    }

    /// Euler identity: exp(-i pi/2 sx) = cos(pi/2) I - i sin(pi/2) sx = -i sx.
    #[test]
    fn expm_of_sigma_x_quarter_turn() {
        let shape = SpaceShape::qubits(1);
        let sx = pauli(PauliAxis::X, 1, shape).unwrap();
        let u = expm_hermitian(&sx, FRAC_PI_2).unwrap();
        assert_close(&u, sx.scaled(c(0., -1.)).entries(), 1e-12);
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let shape = SpaceShape::qubits(1);
        let m = Operator::from_entries(shape, array![[c(0., 0.), c(1., 0.)], [c(0., 0.), c(0., 0.)]])
            .unwrap();
        assert!(matches!(
            expm_hermitian(&m, 1.0),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn expm_group_properties() {
        let shape = SpaceShape::qubits(2);
        let h = &(&pauli(PauliAxis::X, 1, shape).unwrap()
            * &pauli(PauliAxis::X, 2, shape).unwrap())
            + &pauli(PauliAxis::Z, 1, shape).unwrap();
        let (t1, t2) = (0.37, 1.21);
        let u1 = expm_hermitian(&h, t1).unwrap();
        let u2 = expm_hermitian(&h, t2).unwrap();
        let u12 = expm_hermitian(&h, t1 + t2).unwrap();
        assert!((&(&u1 * &u2) - &u12).norm_fro() < 1e-9);
        let back = expm_hermitian(&h, -t1).unwrap();
        assert!((&u1.dagger() - &back).norm_fro() < 1e-10);
        assert!(u1.is_unitary(1e-10));
    }

    #[test]
    fn apply_and_conjugate_agree() {
        let shape = SpaceShape::qubits(2);
        let h = &pauli(PauliAxis::X, 1, shape).unwrap() + &pauli(PauliAxis::Y, 2, shape).unwrap();
        let u = expm_hermitian(&h, 0.4).unwrap();
        let psi = PureState::basis_state(shape, 2).unwrap();
        assert_eq!(apply(&Operator::identity(shape), &psi).unwrap(), psi);

        let upsi = apply(&u, &psi).unwrap();
        assert_abs_diff_eq!(upsi.norm(), 1.0, epsilon = 1e-10);
        let via_state = upsi.to_density();
        let via_matrix = conjugate(&u, &psi.to_density()).unwrap();
        assert!(
            (&via_state.as_operator() - &via_matrix.as_operator()).norm_fro() < 1e-12,
            "U|psi><psi|U† must equal |Upsi><Upsi|"
        );
        assert_abs_diff_eq!(via_matrix.trace().re, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn sigma_x_flips_basis_state() {
        let shape = SpaceShape::qubits(1);
        let sx = pauli(PauliAxis::X, 1, shape).unwrap();
        let zero = PureState::basis_state(shape, 0).unwrap();
        let one = PureState::basis_state(shape, 1).unwrap();
        assert_eq!(apply(&sx, &zero).unwrap(), one);
    }

    #[test]
    fn apply_rejects_shape_mismatch() {
        let u = Operator::identity(SpaceShape::qubits(2));
        let psi = PureState::basis_state(SpaceShape::qubits(1), 0).unwrap();
        assert!(matches!(apply(&u, &psi), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn disjoint_site_embeddings_commute() {
        let shape = SpaceShape::with_mode(3, 2);
        let ops = [
            pauli(PauliAxis::X, 1, shape).unwrap(),
            pauli(PauliAxis::Y, 2, shape).unwrap(),
            pauli(PauliAxis::Z, 3, shape).unwrap(),
            ladder(LadderKind::Lower, shape).unwrap(),
        ];
        // the mode ladder shares no qubit site; Paulis sit on distinct sites
        for (i, a) in ops.iter().enumerate() {
            for b in ops.iter().skip(i + 1) {
                let comm = a.commutator(b);
                // the ladder does not commute with itself family-wise, but all
                // listed pairs act on disjoint factors
                assert!(comm.norm_fro() < 1e-12, "pair should commute");
            }
        }
    }

    #[test]
    fn density_matrix_validation() {
        let shape = SpaceShape::qubits(1);
        let good = DensityMatrix::from_entries(
            shape,
            array![[c(0.5, 0.), c(0.5, 0.)], [c(0.5, 0.), c(0.5, 0.)]],
        )
        .unwrap();
        assert_abs_diff_eq!(good.purity(), 1.0, epsilon = 1e-12);
        assert!(good.min_eigenvalue().unwrap() > -1e-12);

        let bad_trace = DensityMatrix::from_entries(
            shape,
            array![[c(0.9, 0.), c(0., 0.)], [c(0., 0.), c(0.9, 0.)]],
        );
        assert!(bad_trace.is_err());
        let not_hermitian = DensityMatrix::from_entries(
            shape,
            array![[c(0.5, 0.), c(0.5, 0.)], [c(-0.5, 0.), c(0.5, 0.)]],
        );
        assert!(matches!(not_hermitian, Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn basis_index_round_trip() {
        let shape = SpaceShape::with_mode(3, 5);
        for q in 0..8 {
            for m in 0..5 {
                let i = shape.index_of(q, m);
                assert_eq!(shape.qubit_bits(i), q);
                assert_eq!(shape.fock_level(i), m);
            }
        }
        assert_eq!(shape.total_dim(), 40);
        assert_eq!(SpaceShape::qubits(3).total_dim(), 8);
    }

    #[test]
    fn phase_distance_detects_global_phase_only() {
        let shape = SpaceShape::qubits(1);
        let u = expm_hermitian(&pauli(PauliAxis::Z, 1, shape).unwrap(), 0.3).unwrap();
        let v = u.scaled(C64::from_polar(1.0, 1.234));
        assert!(u.phase_distance(&v) < 1e-12);
        let w = expm_hermitian(&pauli(PauliAxis::X, 1, shape).unwrap(), PI / 3.0).unwrap();
        assert!(u.phase_distance(&w) > 0.1);
    }
}
