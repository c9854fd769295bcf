use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, HermitianOperator};
use crate::scalar::{ci, cr, Real};

/// Pauli matrices `(σx, σy, σz)`.
pub fn pauli<T: Real>() -> [ComplexMatrix<T>; 3] {
    let o = cr(T::zero());
    let l = cr(T::one());
    [
        ComplexMatrix::from_fn(2, |i, j| if i != j { l } else { o }),
        ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => ci(-T::one()),
            (1, 0) => ci(T::one()),
            _ => o,
        }),
        ComplexMatrix::from_real_diagonal(&[T::one(), -T::one()]),
    ]
}

/// `op` acting on qubit `site` of `n` qubits (site 0 is the leftmost tensor factor).
pub fn local_qubit_operator<T: Real>(op: &ComplexMatrix<T>, site: usize, n: usize) -> ComplexMatrix<T> {
    let mut out = ComplexMatrix::identity(1);
    for k in 0..n {
        let f = if k == site { op.clone() } else { ComplexMatrix::identity(2) };
        out = out.kron(&f);
    }
    out
}

/// `J_n = ½ Σ_i n·σ_i` on `N` qubits.
#[derive(Clone, Debug)]
pub struct CollectiveSpin<T: Real> {
    n: usize,
    direction: [T; 3],
    operator: HermitianOperator<T>,
}

impl<T: Real> CollectiveSpin<T> {
    /// The direction is normalised; it must be nonzero.
    pub fn new(n: usize, direction: [T; 3]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        if n > 10 {
            return Err(Error::InvalidParameter(format!("{n} qubits exceed the dense size limit")));
        }
        let norm = direction.iter().map(|x| *x * *x).sum::<T>().sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidParameter("direction must be a nonzero finite vector".into()));
        }
        let dir = direction.map(|x| x / norm);
        let s = pauli::<T>();
        let half = T::lit(0.5);
        let single = (0..3).fold(ComplexMatrix::zeros(2), |acc, a| &acc + &s[a].scale_real(dir[a] * half));
        let mut total = ComplexMatrix::zeros(1 << n);
        for site in 0..n {
            total += &local_qubit_operator(&single, site, n);
        }
        Ok(Self {
            n,
            direction: dir,
            operator: HermitianOperator::from_hermitian_part(&total),
        })
    }

    pub fn z(n: usize) -> Self {
        Self::new(n, [T::zero(), T::zero(), T::one()]).expect("valid direction")
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn direction(&self) -> [T; 3] {
        self.direction
    }

    pub fn operator(&self) -> &HermitianOperator<T> {
        &self.operator
    }
}

/// Block of sites with a Hamiltonian acting on their joint space.
#[derive(Clone, Debug)]
pub struct Block<T: Real> {
    pub sites: Vec<usize>,
    pub hamiltonian: HermitianOperator<T>,
}

/// Disjoint blocks covering all sites, with block-local Hamiltonians `H_k`.
#[derive(Clone, Debug)]
pub struct Partition<T: Real> {
    site_dims: Vec<usize>,
    blocks: Vec<Block<T>>,
}

impl<T: Real> Partition<T> {
    pub fn new(site_dims: Vec<usize>, blocks: Vec<Block<T>>) -> Result<Self> {
        if site_dims.is_empty() || site_dims.contains(&0) {
            return Err(Error::InvalidInput("site dimensions must be positive".into()));
        }
        let total: usize = site_dims.iter().product();
        if total > 4096 {
            return Err(Error::InvalidInput(format!("total dimension {total} is too large")));
        }
        let mut seen = vec![false; site_dims.len()];
        for (b, block) in blocks.iter().enumerate() {
            if block.sites.is_empty() {
                return Err(Error::InvalidInput(format!("block {b} is empty")));
            }
            for &s in &block.sites {
                if s >= site_dims.len() {
                    return Err(Error::InvalidInput(format!("block {b} names unknown site {s}")));
                }
                if seen[s] {
                    return Err(Error::InvalidInput(format!("site {s} appears in more than one block")));
                }
                seen[s] = true;
            }
            let d: usize = block.sites.iter().map(|&s| site_dims[s]).product();
            if block.hamiltonian.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: block.hamiltonian.dim(),
                });
            }
        }
        if let Some(s) = seen.iter().position(|x| !x) {
            return Err(Error::InvalidInput(format!("site {s} is not covered by any block")));
        }
        Ok(Self { site_dims, blocks })
    }

    /// One block per qubit, each with the same single-qubit Hamiltonian.
    pub fn qubits(n: usize, local: &HermitianOperator<T>) -> Result<Self> {
        Self::new(
            vec![2; n],
            (0..n)
                .map(|s| Block {
                    sites: vec![s],
                    hamiltonian: local.clone(),
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.site_dims.iter().product()
    }

    pub fn site_dims(&self) -> &[usize] {
        &self.site_dims
    }

    pub fn blocks(&self) -> &[Block<T>] {
        &self.blocks
    }

    /// `H_k ⊗ 𝕀` on the full space.
    pub fn embedded(&self, k: usize) -> HermitianOperator<T> {
        let block = &self.blocks[k];
        let dims = &self.site_dims;
        let n = dims.len();
        let digits = |mut idx: usize| {
            let mut d = vec![0; n];
            for s in (0..n).rev() {
                d[s] = idx % dims[s];
                idx /= dims[s];
            }
            d
        };
        let sub = |d: &[usize]| block.sites.iter().fold(0, |acc, &s| acc * dims[s] + d[s]);
        let total = self.dim();
        let all: Vec<Vec<usize>> = (0..total).map(digits).collect();
        let h = block.hamiltonian.matrix();
        let m = ComplexMatrix::from_fn(total, |i, j| {
            let (a, b) = (&all[i], &all[j]);
            let outside_equal = (0..n).all(|s| block.sites.contains(&s) || a[s] == b[s]);
            if outside_equal {
                h[(sub(a), sub(b))]
            } else {
                cr(T::zero())
            }
        });
        HermitianOperator::from_hermitian_part(&m)
    }

    /// `H_𝒜 = Σ_k H_k`
    pub fn total(&self) -> HermitianOperator<T> {
        (0..self.blocks.len()).fold(HermitianOperator::zeros(self.dim()), |acc, k| acc.add(&self.embedded(k)))
    }
}
