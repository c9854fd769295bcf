//! Serde schemas for matrices, states, measurements, families and partitions.
//!
//! A matrix is `{"dim": n, "entries": [[[re, im], ...], ...]}` with row-major entries.
//! Top-level documents carry a `"type"` tag; families carry an additional `"kind"` tag.

use serde::{Deserialize, Serialize};

use crate::bounds::{Block, Partition};
use crate::error::{Error, Result};
use crate::matcore::{
    commutator_map, non_hermitian_map, psd_tol, ComplexMatrix, DensityMatrix, HermitianOperator, PureState,
    Superoperator,
};
use crate::quantum::{ParametricFamily, Povm};
use crate::scalar::{Real, C};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix<T: Real>(m: &ComplexMatrix<T>) -> Self {
        Self {
            dim: m.dim(),
            entries: m
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect())
                .collect(),
        }
    }

    /// Square, finite, and consistent with `dim`.
    pub fn to_matrix<T: Real>(&self) -> Result<ComplexMatrix<T>> {
        if self.entries.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "matrix declares dim {} but has {} rows",
                self.dim,
                self.entries.len()
            )));
        }
        ComplexMatrix::from_rows(
            self.entries
                .iter()
                .map(|r| r.iter().map(|[re, im]| C::new(T::lit(*re), T::lit(*im))).collect())
                .collect(),
        )
    }
}

fn amplitudes<T: Real>(a: &[[f64; 2]]) -> Vec<C<T>> {
    a.iter().map(|[re, im]| C::new(T::lit(*re), T::lit(*im))).collect()
}

pub fn amplitudes_json<T: Real>(psi: &PureState<T>) -> Vec<[f64; 2]> {
    psi.amplitudes().iter().map(|z| [z.re.as_f64(), z.im.as_f64()]).collect()
}

/// A state given either as a vector or as a density matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateJson {
    Pure { amplitudes: Vec<[f64; 2]> },
    Density { matrix: MatrixJson },
}

impl StateJson {
    pub fn to_density<T: Real>(&self) -> Result<DensityMatrix<T>> {
        match self {
            StateJson::Pure { amplitudes: a } => Ok(PureState::new(amplitudes(a))?.density()),
            StateJson::Density { matrix } => DensityMatrix::new(matrix.to_matrix()?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TablePointJson {
    pub theta: f64,
    pub state: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyJson {
    Unitary {
        hamiltonian: MatrixJson,
        state: StateJson,
    },
    NonHermitian {
        hamiltonian: MatrixJson,
        gamma: MatrixJson,
        state: StateJson,
    },
    /// `generator` is the `n²×n²` matrix acting on column-stacked operators.
    Lindblad {
        generator: MatrixJson,
        state: StateJson,
    },
    Thermal {
        hamiltonian: MatrixJson,
    },
    Table {
        points: Vec<TablePointJson>,
    },
}

fn hermitian<T: Real>(m: &MatrixJson) -> Result<HermitianOperator<T>> {
    HermitianOperator::new(m.to_matrix()?)
}

impl FamilyJson {
    pub fn to_family<T: Real>(&self) -> Result<ParametricFamily<T>> {
        match self {
            FamilyJson::Unitary { hamiltonian, state } => {
                ParametricFamily::unitary(hermitian(hamiltonian)?, state.to_density()?)
            }
            FamilyJson::NonHermitian {
                hamiltonian,
                gamma,
                state,
            } => ParametricFamily::non_hermitian(hermitian(hamiltonian)?, hermitian(gamma)?, state.to_density()?),
            FamilyJson::Lindblad { generator, state } => {
                ParametricFamily::lindblad(Superoperator::from_matrix(generator.to_matrix()?)?, state.to_density()?)
            }
            FamilyJson::Thermal { hamiltonian } => Ok(ParametricFamily::thermal(hermitian(hamiltonian)?)),
            FamilyJson::Table { points } => ParametricFamily::table(
                points
                    .iter()
                    .map(|p| Ok((T::lit(p.theta), hermitian(&p.state)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    pub sites: Vec<usize>,
    pub hamiltonian: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub site_dims: Vec<usize>,
    pub blocks: Vec<BlockJson>,
}

impl PartitionJson {
    pub fn to_partition<T: Real>(&self) -> Result<Partition<T>> {
        Partition::new(
            self.site_dims.clone(),
            self.blocks
                .iter()
                .map(|b| {
                    Ok(Block {
                        sites: b.sites.clone(),
                        hamiltonian: hermitian(&b.hamiltonian)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Document {
    Density(MatrixJson),
    Hermitian(MatrixJson),
    Pure { amplitudes: Vec<[f64; 2]> },
    Povm { elements: Vec<MatrixJson> },
    Family(FamilyJson),
    Partition(PartitionJson),
    Superoperator(MatrixJson),
    /// Local generator `X ↦ −i(H_eff X − X H_eff†)`, `H_eff = H − iΓ`.
    NonHermitianGenerator { hamiltonian: MatrixJson, gamma: MatrixJson },
}

impl Document {
    pub fn type_name(&self) -> &'static str {
        match self {
            Document::Density(_) => "density",
            Document::Hermitian(_) => "hermitian",
            Document::Pure { .. } => "pure",
            Document::Povm { .. } => "povm",
            Document::Family(_) => "family",
            Document::Partition(_) => "partition",
            Document::Superoperator(_) => "superoperator",
            Document::NonHermitianGenerator { .. } => "non_hermitian_generator",
        }
    }

    pub fn density<T: Real>(&self) -> Result<DensityMatrix<T>> {
        match self {
            Document::Density(m) => DensityMatrix::new(m.to_matrix()?),
            Document::Pure { amplitudes: a } => Ok(PureState::new(amplitudes(a))?.density()),
            other => Err(wrong_type("density or pure", other)),
        }
    }

    pub fn hermitian<T: Real>(&self) -> Result<HermitianOperator<T>> {
        match self {
            Document::Hermitian(m) => hermitian(m),
            other => Err(wrong_type("hermitian", other)),
        }
    }

    pub fn povm<T: Real>(&self) -> Result<Povm<T>> {
        match self {
            Document::Povm { elements } => Povm::new(elements.iter().map(hermitian).collect::<Result<Vec<_>>>()?),
            other => Err(wrong_type("povm", other)),
        }
    }

    pub fn family<T: Real>(&self) -> Result<ParametricFamily<T>> {
        match self {
            Document::Family(f) => f.to_family(),
            other => Err(wrong_type("family", other)),
        }
    }

    pub fn partition<T: Real>(&self) -> Result<Partition<T>> {
        match self {
            Document::Partition(p) => p.to_partition(),
            other => Err(wrong_type("partition", other)),
        }
    }

    /// Generators: a Hermitian `H` stands for `−i[H, ·]`.
    pub fn generator<T: Real>(&self) -> Result<Superoperator<T>> {
        match self {
            Document::Hermitian(m) => Ok(commutator_map(&hermitian(m)?)),
            Document::Superoperator(m) => Superoperator::from_matrix(m.to_matrix()?),
            Document::NonHermitianGenerator { hamiltonian, gamma } => {
                non_hermitian_map(&hermitian(hamiltonian)?, &hermitian(gamma)?)
            }
            other => Err(wrong_type("hermitian, superoperator or non_hermitian_generator", other)),
        }
    }
}

fn wrong_type(expected: &str, got: &Document) -> Error {
    Error::InvalidInput(format!("expected a {expected} document, found type '{}'", got.type_name()))
}

/// Parse a document; syntax errors carry line and column, schema errors name the field.
pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| {
        if e.line() > 0 {
            Error::InvalidInput(e.to_string())
        } else {
            Error::InvalidInput(format!("schema: {e}"))
        }
    })
}

/// Round to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// One violated invariant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    /// Location inside the document, e.g. `family.state` or `elements[2]`.
    pub path: String,
    pub check: &'static str,
    pub magnitude: f64,
    pub message: String,
}

struct Checker {
    out: Vec<Diagnostic>,
}

impl Checker {
    fn push(&mut self, path: &str, check: &'static str, magnitude: f64, message: String) {
        self.out.push(Diagnostic {
            path: path.to_string(),
            check,
            magnitude,
            message,
        });
    }

    fn matrix(&mut self, path: &str, m: &MatrixJson) -> Option<ComplexMatrix<f64>> {
        match m.to_matrix::<f64>() {
            Ok(x) => Some(x),
            Err(e) => {
                self.push(path, "shape", f64::NAN, e.to_string());
                None
            }
        }
    }

    fn hermitian(&mut self, path: &str, m: &MatrixJson) -> Option<HermitianOperator<f64>> {
        let x = self.matrix(path, m)?;
        let (dev, row, col) = x.hermiticity_deviation();
        if dev > f64::herm_tol() {
            self.push(
                path,
                "hermiticity",
                dev,
                format!("max asymmetry |X - X^dagger| = {} at entry ({row}, {col})", round_sig(dev, 12)),
            );
        }
        Some(HermitianOperator::from_hermitian_part(&x))
    }

    fn positivity(&mut self, path: &str, h: &HermitianOperator<f64>, scale_floor: f64) {
        let e = h.eig();
        let tol = psd_tol(h.dim(), e.max_abs_value().max(scale_floor));
        if e.min() < -tol {
            self.push(
                path,
                "positivity",
                -e.min(),
                format!("negative eigenvalue {}", round_sig(e.min(), 12)),
            );
        }
    }

    fn density(&mut self, path: &str, m: &MatrixJson) -> Option<usize> {
        let h = self.hermitian(path, m)?;
        let dev = (h.matrix().trace().re - 1.0).abs();
        if dev > f64::herm_tol() {
            self.push(path, "trace", dev, format!("trace deviation {}", round_sig(dev, 12)));
        }
        self.positivity(path, &h, 0.0);
        Some(h.dim())
    }

    fn pure(&mut self, path: &str, a: &[[f64; 2]]) -> Option<usize> {
        if a.is_empty() {
            self.push(path, "shape", f64::NAN, "empty state vector".into());
            return None;
        }
        let n2: f64 = a.iter().map(|[re, im]| re * re + im * im).sum();
        let dev = (n2 - 1.0).abs();
        if dev > f64::herm_tol() || !n2.is_finite() {
            self.push(path, "trace", dev, format!("norm deviation {}", round_sig(dev, 12)));
        }
        Some(a.len())
    }

    fn state(&mut self, path: &str, s: &StateJson) -> Option<usize> {
        match s {
            StateJson::Pure { amplitudes: a } => self.pure(path, a),
            StateJson::Density { matrix } => self.density(path, matrix),
        }
    }

    fn dims(&mut self, path: &str, expected: usize, found: usize) {
        if expected != found {
            self.push(
                path,
                "dimension",
                (expected as f64 - found as f64).abs(),
                format!("dimension {found} does not match {expected}"),
            );
        }
    }

    fn superop(&mut self, path: &str, m: &MatrixJson) -> Option<Superoperator<f64>> {
        let x = self.matrix(path, m)?;
        let big = x.dim();
        let n = (big as f64).sqrt().round() as usize;
        if n * n != big {
            self.push(path, "shape", big as f64, format!("dimension {big} is not a perfect square"));
            return None;
        }
        match Superoperator::from_matrix(x) {
            Ok(s) => Some(s),
            Err(e) => {
                let dev = explicit_preservation_deviation(m, n);
                self.push(path, "hermiticity_preservation", dev, e.to_string());
                None
            }
        }
    }
}

fn explicit_preservation_deviation(m: &MatrixJson, n: usize) -> f64 {
    let x = match m.to_matrix::<f64>() {
        Ok(x) => x,
        Err(_) => return f64::NAN,
    };
    let apply = |e: &ComplexMatrix<f64>| {
        crate::matcore::unvectorize(&x.mul_vec(&crate::matcore::vectorize(e)), n)
    };
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut eij = ComplexMatrix::zeros(n);
            eij[(i, j)] = C::new(1.0, 0.0);
            let mut eji = ComplexMatrix::zeros(n);
            eji[(j, i)] = C::new(1.0, 0.0);
            worst = worst.max((&apply(&eij).adjoint() - &apply(&eji)).max_abs());
        }
    }
    worst
}

/// Every violated invariant in `doc`; empty when the document is valid.
pub fn validate(doc: &Document) -> Vec<Diagnostic> {
    let mut c = Checker { out: Vec::new() };
    match doc {
        Document::Density(m) => {
            c.density("density", m);
        }
        Document::Hermitian(m) => {
            c.hermitian("hermitian", m);
        }
        Document::Pure { amplitudes: a } => {
            c.pure("pure", a);
        }
        Document::Povm { elements } => {
            if elements.is_empty() {
                c.push("povm", "shape", f64::NAN, "POVM has no elements".into());
            }
            let mut total: Option<ComplexMatrix<f64>> = None;
            for (k, e) in elements.iter().enumerate() {
                let path = format!("elements[{k}]");
                if let Some(h) = c.hermitian(&path, e) {
                    c.positivity(&path, &h, 1.0);
                    match &mut total {
                        None => total = Some(h.into_matrix()),
                        Some(t) if t.dim() == h.dim() => *t += h.matrix(),
                        Some(t) => {
                            let d = t.dim();
                            c.dims(&path, d, h.dim());
                        }
                    }
                }
            }
            if let Some(t) = total {
                let dev = (&t - &ComplexMatrix::identity(t.dim())).max_abs();
                if dev > f64::herm_tol() {
                    c.push(
                        "povm",
                        "completeness",
                        dev,
                        format!("elements sum to identity up to {}", round_sig(dev, 12)),
                    );
                }
            }
        }
        Document::Family(f) => validate_family(&mut c, f),
        Document::Partition(p) => {
            for (k, b) in p.blocks.iter().enumerate() {
                c.hermitian(&format!("blocks[{k}].hamiltonian"), &b.hamiltonian);
            }
            if c.out.is_empty() {
                if let Err(e) = p.to_partition::<f64>() {
                    c.push("partition", "structure", f64::NAN, e.to_string());
                }
            }
        }
        Document::Superoperator(m) => {
            c.superop("superoperator", m);
        }
        Document::NonHermitianGenerator { hamiltonian, gamma } => {
            let h = c.hermitian("hamiltonian", hamiltonian);
            let g = c.hermitian("gamma", gamma);
            if let (Some(h), Some(g)) = (h, g) {
                c.dims("gamma", h.dim(), g.dim());
            }
        }
    }
    c.out
}

fn validate_family(c: &mut Checker, f: &FamilyJson) {
    match f {
        FamilyJson::Unitary { hamiltonian, state } => {
            let h = c.hermitian("family.hamiltonian", hamiltonian).map(|h| h.dim());
            let s = c.state("family.state", state);
            if let (Some(h), Some(s)) = (h, s) {
                c.dims("family.state", h, s);
            }
        }
        FamilyJson::NonHermitian {
            hamiltonian,
            gamma,
            state,
        } => {
            let h = c.hermitian("family.hamiltonian", hamiltonian).map(|h| h.dim());
            let g = c.hermitian("family.gamma", gamma).map(|g| g.dim());
            let s = c.state("family.state", state);
            if let (Some(h), Some(g)) = (h, g) {
                c.dims("family.gamma", h, g);
            }
            if let (Some(h), Some(s)) = (h, s) {
                c.dims("family.state", h, s);
            }
        }
        FamilyJson::Lindblad { generator, state } => {
            let l = c.superop("family.generator", generator);
            let s = c.state("family.state", state);
            if let Some(l) = &l {
                let dev = l.trace_deviation();
                if dev > f64::herm_tol() {
                    c.push(
                        "family.generator",
                        "trace_preservation",
                        dev,
                        format!("generator changes the trace by up to {}", round_sig(dev, 12)),
                    );
                }
                if let Some(s) = s {
                    c.dims("family.state", l.dim(), s);
                }
            }
        }
        FamilyJson::Thermal { hamiltonian } => {
            c.hermitian("family.hamiltonian", hamiltonian);
        }
        FamilyJson::Table { points } => {
            for (k, p) in points.iter().enumerate() {
                c.hermitian(&format!("family.points[{k}].state"), &p.state);
            }
            if c.out.is_empty() {
                if let Err(e) = f.to_family::<f64>() {
                    c.push("family.points", "structure", f64::NAN, e.to_string());
                }
            }
        }
    }
}
