//! The twenty benchmark objectives: ten classical functions and the first ten
//! CEC 2005 functions.
//!
//! Classical functions are unshifted and have their minimum at a fixed point.
//! The CEC functions need shift vectors (and for F3, F5, F7, F8, F10 a matrix).
//! Those come from plain-text data files named in a [`SuiteManifest`]; when no
//! file is given, the data is generated from a fixed seed:
//!
//! * stream seed = [`SYNTHETIC_SEED`] + 1000 · (CEC index) + D;
//! * shift: uniform inside the central 80 % of the box;
//! * rotation: Gaussian D×D matrix, rows orthonormalized by Gram–Schmidt;
//! * F5: the CEC rule for the optimum (first ⌈D/4⌉ coordinates at −100, from
//!   ⌊3D/4⌋ on at +100) and integer matrix entries in [−500, 500].
//!
//! F4 is evaluated without its multiplicative noise term so that evaluation
//! stays pure.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{DrawSource, RandomStream};
use crate::scalar::Scalar;

/// Root seed for synthetic CEC shift/rotation data.
pub const SYNTHETIC_SEED: u64 = 0x00C0_FFEE_2005;

/// Schwefel 2.26 constant per dimension.
pub const SCHWEFEL_CONST: f64 = 418.982_887_272_433_9;
/// Minimizer of Schwefel 2.26 along each axis.
pub const SCHWEFEL_OPTIMIZER: f64 = 420.968_746;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionId {
    Sphere,
    Rosenbrock,
    Ackley,
    Griewank,
    Rastrigin,
    Schwefel,
    Salomon,
    Whitley,
    Penalized1,
    Penalized2,
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
}

use FunctionId::*;

impl FunctionId {
    /// All twenty functions in table order.
    pub const ALL: [FunctionId; 20] = [
        Sphere, Rosenbrock, Ackley, Griewank, Rastrigin, Schwefel, Salomon, Whitley, Penalized1,
        Penalized2, F1, F2, F3, F4, F5, F6, F7, F8, F9, F10,
    ];

    /// The ten unshifted functions.
    pub const CLASSICAL: [FunctionId; 10] = [
        Sphere, Rosenbrock, Ackley, Griewank, Rastrigin, Schwefel, Salomon, Whitley, Penalized1,
        Penalized2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Sphere => "F_sph",
            Rosenbrock => "F_ros",
            Ackley => "F_ack",
            Griewank => "F_grw",
            Rastrigin => "F_ras",
            Schwefel => "F_sch",
            Salomon => "F_sal",
            Whitley => "F_wht",
            Penalized1 => "F_pn1",
            Penalized2 => "F_pn2",
            F1 => "F1",
            F2 => "F2",
            F3 => "F3",
            F4 => "F4",
            F5 => "F5",
            F6 => "F6",
            F7 => "F7",
            F8 => "F8",
            F9 => "F9",
            F10 => "F10",
        }
    }

    /// CEC 2005 function number, if this is one.
    pub fn cec_index(self) -> Option<u64> {
        let pos = Self::ALL.iter().position(|&f| f == self).expect("listed") as u64;
        (pos >= 10).then(|| pos - 9)
    }

    pub fn is_classical(self) -> bool {
        self.cec_index().is_none()
    }

    /// Box bounds, identical in every coordinate.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Sphere | Salomon => (-100.0, 100.0),
            Rosenbrock => (-30.0, 30.0),
            Ackley | F8 => (-32.0, 32.0),
            Griewank | F7 => (-600.0, 600.0),
            Rastrigin => (-5.12, 5.12),
            Schwefel => (-500.0, 500.0),
            Whitley => (-10.24, 10.24),
            Penalized1 | Penalized2 => (-50.0, 50.0),
            F1 | F2 | F3 | F4 | F5 | F6 => (-100.0, 100.0),
            F9 | F10 => (-5.0, 5.0),
        }
    }

    /// CEC 2005 bias; zero for classical functions.
    pub fn default_bias(self) -> f64 {
        match self {
            F1 | F2 | F3 | F4 => -450.0,
            F5 => -310.0,
            F6 => 390.0,
            F7 => -180.0,
            F8 => -140.0,
            F9 | F10 => -330.0,
            _ => 0.0,
        }
    }

    fn uses_rotation(self) -> bool {
        matches!(self, F3 | F7 | F8 | F10)
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self { n, data }
    }

    /// Builds from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<T>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self {
            n,
            data: rows.concat(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Row-vector product `y · M`.
    pub fn left_mul(&self, y: &[T]) -> Vec<T> {
        let mut z = vec![T::zero(); self.n];
        for (i, &yi) in y.iter().enumerate() {
            for (zj, &m) in z.iter_mut().zip(self.row(i)) {
                *zj += yi * m;
            }
        }
        z
    }

    /// Column-vector product `M · x`.
    pub fn right_mul(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| dot(self.row(i), x))
            .collect()
    }

    /// `max |MᵀM − I|` entrywise.
    pub fn orthogonality_error(&self) -> T {
        let n = self.n;
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let mut s = T::zero();
                for k in 0..n {
                    s += self.get(k, i) * self.get(k, j);
                }
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    pub fn is_orthogonal(&self, tol: T) -> bool {
        self.orthogonality_error() < tol
    }

    fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&v| U::lit(v.as_f64())).collect(),
        }
    }
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// A named objective with box bounds and a known optimum value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchmarkProblem<T> {
    pub id: FunctionId,
    pub dim: usize,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    pub f_bias: T,
    pub shift: Option<Vec<T>>,
    pub rotation: Option<Matrix<T>>,
    /// F5 only: the matrix `A` and offsets `B = A o` of `max |A x − B|`.
    pub linear: Option<(Matrix<T>, Vec<T>)>,
    pub optimum_value: T,
}

impl<T: Scalar> BenchmarkProblem<T> {
    pub fn name(&self) -> &'static str {
        self.id.name()
    }

    /// Objective value at `x`; errors if the length is not `dim`.
    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    /// A point where the objective attains `optimum_value`.
    pub fn known_optimizer(&self) -> Vec<T> {
        match self.id {
            Sphere | Ackley | Griewank | Rastrigin | Salomon => vec![T::zero(); self.dim],
            Rosenbrock | Whitley | Penalized2 => vec![T::one(); self.dim],
            Penalized1 => vec![-T::one(); self.dim],
            Schwefel => vec![T::lit(SCHWEFEL_OPTIMIZER); self.dim],
            _ => self.shift.clone().expect("CEC problems carry a shift"),
        }
    }

    /// Distance of `value` above the optimum.
    pub fn error_of(&self, value: T) -> T {
        value - self.optimum_value
    }

    pub(crate) fn eval_unchecked(&self, x: &[T]) -> T {
        let core = match self.id {
            Sphere => sphere(x),
            Rosenbrock => rosenbrock(x),
            Ackley => ackley(x),
            Griewank => griewank(x),
            Rastrigin => rastrigin(x),
            Schwefel => schwefel_226(x),
            Salomon => salomon(x),
            Whitley => whitley(x),
            Penalized1 => penalized1(x),
            Penalized2 => penalized2(x),
            F1 => sphere(&self.shifted(x)),
            F2 | F4 => schwefel_12(&self.shifted(x)),
            F3 => elliptic(&self.transformed(x)),
            F5 => {
                let (a, b) = self.linear.as_ref().expect("F5 carries its matrix");
                a.right_mul(x)
                    .iter()
                    .zip(b)
                    .fold(T::zero(), |m, (&ax, &bi)| m.max((ax - bi).abs()))
            }
            F6 => {
                let z: Vec<T> = self.shifted(x).into_iter().map(|v| v + T::one()).collect();
                rosenbrock(&z)
            }
            F7 => griewank(&self.transformed(x)),
            F8 => ackley(&self.transformed(x)),
            F9 => rastrigin(&self.shifted(x)),
            F10 => rastrigin(&self.transformed(x)),
        };
        core + self.f_bias
    }

    fn shifted(&self, x: &[T]) -> Vec<T> {
        match &self.shift {
            Some(o) => x.iter().zip(o).map(|(&a, &b)| a - b).collect(),
            None => x.to_vec(),
        }
    }

    fn transformed(&self, x: &[T]) -> Vec<T> {
        let y = self.shifted(x);
        match &self.rotation {
            Some(m) => m.left_mul(&y),
            None => y,
        }
    }
}

fn sphere<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |s, &v| s + v * v)
}

fn rosenbrock<T: Scalar>(x: &[T]) -> T {
    let hundred = T::lit(100.0);
    x.windows(2).fold(T::zero(), |s, w| {
        s + hundred * (w[1] - w[0] * w[0]).squared() + (w[0] - T::one()).squared()
    })
}

fn ackley<T: Scalar>(x: &[T]) -> T {
    let n = T::from_usize(x.len());
    let two_pi = T::two() * T::PI();
    let sq = sphere(x) / n;
    let cs = x.iter().fold(T::zero(), |s, &v| s + (two_pi * v).cos()) / n;
    -T::lit(20.0) * (-T::lit(0.2) * sq.sqrt()).exp() - cs.exp() + T::lit(20.0) + T::E()
}

fn griewank<T: Scalar>(x: &[T]) -> T {
    let sum = sphere(x) / T::lit(4000.0);
    let prod = x
        .iter()
        .enumerate()
        .fold(T::one(), |p, (i, &v)| p * (v / T::from_usize(i + 1).sqrt()).cos());
    sum - prod + T::one()
}

fn rastrigin<T: Scalar>(x: &[T]) -> T {
    let ten = T::lit(10.0);
    let two_pi = T::two() * T::PI();
    x.iter()
        .fold(T::zero(), |s, &v| s + v * v - ten * (two_pi * v).cos() + ten)
}

fn schwefel_226<T: Scalar>(x: &[T]) -> T {
    let s = x.iter().fold(T::zero(), |s, &v| s + v * v.abs().sqrt().sin());
    T::lit(SCHWEFEL_CONST) * T::from_usize(x.len()) - s
}

fn salomon<T: Scalar>(x: &[T]) -> T {
    let r = sphere(x).sqrt();
    T::one() - (T::two() * T::PI() * r).cos() + T::lit(0.1) * r
}

fn whitley<T: Scalar>(x: &[T]) -> T {
    let mut s = T::zero();
    for &xi in x {
        for &xj in x {
            let y = T::lit(100.0) * (xj - xi * xi).squared() + (T::one() - xi).squared();
            s += y * y / T::lit(4000.0) - y.cos() + T::one();
        }
    }
    s
}

/// Penalty `u(x, a, k, m)` of the generalized penalized functions.
fn penalty<T: Scalar>(x: T, a: T, k: T, m: i32) -> T {
    if x > a {
        k * (x - a).powi(m)
    } else if x < -a {
        k * (-x - a).powi(m)
    } else {
        T::zero()
    }
}

fn penalized1<T: Scalar>(x: &[T]) -> T {
    let pi = T::PI();
    let ten = T::lit(10.0);
    let four = T::lit(4.0);
    let y: Vec<T> = x.iter().map(|&v| T::one() + (v + T::one()) / four).collect();
    let d = y.len();
    let mut s = ten * (pi * y[0]).sin().squared();
    for i in 0..d - 1 {
        s += (y[i] - T::one()).squared() * (T::one() + ten * (pi * y[i + 1]).sin().squared());
    }
    s += (y[d - 1] - T::one()).squared();
    let pen = x
        .iter()
        .fold(T::zero(), |p, &v| p + penalty(v, ten, T::lit(100.0), 4));
    pi / T::from_usize(d) * s + pen
}

fn penalized2<T: Scalar>(x: &[T]) -> T {
    let pi = T::PI();
    let three_pi = T::lit(3.0) * pi;
    let d = x.len();
    let mut s = (three_pi * x[0]).sin().squared();
    for i in 0..d - 1 {
        s += (x[i] - T::one()).squared() * (T::one() + (three_pi * x[i + 1]).sin().squared());
    }
    s += (x[d - 1] - T::one()).squared() * (T::one() + (T::two() * pi * x[d - 1]).sin().squared());
    let pen = x
        .iter()
        .fold(T::zero(), |p, &v| p + penalty(v, T::lit(5.0), T::lit(100.0), 4));
    T::lit(0.1) * s + pen
}

fn schwefel_12<T: Scalar>(z: &[T]) -> T {
    let mut partial = T::zero();
    z.iter().fold(T::zero(), |s, &v| {
        partial += v;
        s + partial * partial
    })
}

fn elliptic<T: Scalar>(z: &[T]) -> T {
    let d = z.len();
    let denom = if d > 1 { (d - 1) as f64 } else { 1.0 };
    z.iter().enumerate().fold(T::zero(), |s, (i, &v)| {
        s + T::lit(1e6f64.powf(i as f64 / denom)) * v * v
    })
}

/// Data-file locations for the CEC functions.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ManifestEntry {
    #[serde(default)]
    pub shift: Option<PathBuf>,
    #[serde(default)]
    pub rotation: Option<PathBuf>,
    #[serde(default)]
    pub bias: Option<f64>,
}

/// Maps function names to external shift/rotation data.
///
/// The JSON form is an object `{ "F1": { "shift": path, "rotation": path,
/// "bias": number }, ... }`. Relative paths resolve against the manifest's
/// directory. Names without an entry use synthetic data.
#[derive(Clone, Debug, Default)]
pub struct SuiteManifest {
    pub base_dir: PathBuf,
    pub entries: BTreeMap<String, ManifestEntry>,
}

impl SuiteManifest {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let entries: BTreeMap<String, ManifestEntry> = serde_json::from_str(&text)?;
        for name in entries.keys() {
            name.parse::<FunctionId>()?;
        }
        Ok(Self {
            base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            entries,
        })
    }

    fn entry(&self, id: FunctionId) -> Option<&ManifestEntry> {
        self.entries
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(id.name()))
            .map(|(_, v)| v)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

/// Reads whitespace-separated decimal text, one row per non-empty line.
pub fn read_table(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            line.split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|e| Error::DataFile {
                        path: path.to_path_buf(),
                        reason: format!("row {}: `{tok}`: {e}", i + 1),
                    })
                })
                .collect()
        })
        .collect()
}

fn load_shift(path: &Path, dim: usize) -> Result<Vec<f64>> {
    let values: Vec<f64> = read_table(path)?.into_iter().flatten().collect();
    if values.is_empty() {
        return Err(Error::DataFile {
            path: path.to_path_buf(),
            reason: "no values".into(),
        });
    }
    if values.len() < dim {
        return Err(Error::UnsupportedDimension {
            path: path.to_path_buf(),
            available: values.len(),
            requested: dim,
        });
    }
    Ok(values[..dim].to_vec())
}

/// Loads a D×D matrix. With `allow_block`, a larger matrix contributes its
/// top-left block (the CEC convention for F5).
fn load_matrix(path: &Path, dim: usize, allow_block: bool) -> Result<Matrix<f64>> {
    let rows = read_table(path)?;
    let too_small = rows.len() < dim || rows.iter().take(dim).any(|r| r.len() < dim);
    let wrong_shape = !allow_block && (rows.len() != dim || rows.iter().any(|r| r.len() != dim));
    if too_small || wrong_shape {
        return Err(Error::UnsupportedDimension {
            path: path.to_path_buf(),
            available: rows.len(),
            requested: dim,
        });
    }
    let block: Vec<Vec<f64>> = rows.iter().take(dim).map(|r| r[..dim].to_vec()).collect();
    Ok(Matrix::from_rows(&block).expect("square block"))
}

/// Orthonormalized Gaussian matrix (modified Gram–Schmidt over rows).
pub fn random_rotation(dim: usize, src: &mut impl DrawSource) -> Matrix<f64> {
    loop {
        let mut rows: Vec<Vec<f64>> = (0..dim)
            .map(|_| (0..dim).map(|_| src.standard_normal()).collect())
            .collect();
        let mut ok = true;
        for i in 0..dim {
            for j in 0..i {
                let (done, rest) = rows.split_at_mut(i);
                let p = dot(&rest[0], &done[j]);
                for (a, &b) in rest[0].iter_mut().zip(&done[j]) {
                    *a -= p * b;
                }
            }
            let norm = dot(&rows[i], &rows[i]).sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            rows[i].iter_mut().for_each(|v| *v /= norm);
        }
        if ok {
            return Matrix::from_rows(&rows).expect("square");
        }
    }
}

/// Builds one problem.
pub fn get_problem<T: Scalar>(
    name: &str,
    dim: usize,
    manifest: &SuiteManifest,
) -> Result<BenchmarkProblem<T>> {
    let id: FunctionId = name.parse()?;
    build(id, dim, manifest)
}

/// All twenty problems at dimension `dim`, in table order.
pub fn suite<T: Scalar>(dim: usize, manifest: &SuiteManifest) -> Result<Vec<BenchmarkProblem<T>>> {
    FunctionId::ALL
        .iter()
        .map(|&id| build(id, dim, manifest))
        .collect()
}

pub fn build<T: Scalar>(
    id: FunctionId,
    dim: usize,
    manifest: &SuiteManifest,
) -> Result<BenchmarkProblem<T>> {
    if dim == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    let (lo, hi) = id.domain();
    let mut problem = BenchmarkProblem {
        id,
        dim,
        lower: vec![T::lit(lo); dim],
        upper: vec![T::lit(hi); dim],
        f_bias: T::zero(),
        shift: None,
        rotation: None,
        linear: None,
        optimum_value: T::zero(),
    };
    let Some(cec) = id.cec_index() else {
        return Ok(problem);
    };

    let entry = manifest.entry(id).cloned().unwrap_or_default();
    let bias = entry.bias.unwrap_or_else(|| id.default_bias());
    let mut src = RandomStream::new(SYNTHETIC_SEED + 1000 * cec + dim as u64);

    let mut shift = match &entry.shift {
        Some(p) => load_shift(&manifest.resolve(p), dim)?,
        None => (0..dim)
            .map(|_| lo + (0.1 + 0.8 * src.uniform_open::<f64>()) * (hi - lo))
            .collect(),
    };
    if entry.shift.is_none() {
        match id {
            F5 => {
                let first = dim.div_ceil(4);
                let last = (3 * dim) / 4;
                for (i, o) in shift.iter_mut().enumerate() {
                    if i < first {
                        *o = lo;
                    } else if i + 1 >= last.max(1) {
                        *o = hi;
                    }
                }
            }
            F8 => shift.iter_mut().step_by(2).for_each(|o| *o = lo),
            _ => {}
        }
    }

    if id == F5 {
        let a = match &entry.rotation {
            Some(p) => load_matrix(&manifest.resolve(p), dim, true)?,
            None => {
                let rows: Vec<Vec<f64>> = (0..dim)
                    .map(|_| {
                        (0..dim)
                            .map(|_| (src.index_below(1001) as f64) - 500.0)
                            .collect()
                    })
                    .collect();
                Matrix::from_rows(&rows).expect("square")
            }
        };
        let b = a.right_mul(&shift);
        problem.linear = Some((a.cast(), b.iter().map(|&v| T::lit(v)).collect()));
    } else if id.uses_rotation() {
        let m = match &entry.rotation {
            Some(p) => load_matrix(&manifest.resolve(p), dim, false)?,
            None => random_rotation(dim, &mut src),
        };
        problem.rotation = Some(m.cast());
    }

    problem.shift = Some(shift.iter().map(|&v| T::lit(v)).collect());
    problem.f_bias = T::lit(bias);
    problem.optimum_value = T::lit(bias);
    Ok(problem)
}
