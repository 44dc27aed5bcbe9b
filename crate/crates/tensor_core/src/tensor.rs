use crate::{check_limits, Result, TensorError};
use std::fmt;
use std::str::FromStr;

const CLASS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryClass {
    General,
    Symmetric,
    Alternating,
    SymmetricTraceless,
}

impl SymmetryClass {
    pub const ALL: [SymmetryClass; 4] = [
        SymmetryClass::General,
        SymmetryClass::Symmetric,
        SymmetryClass::Alternating,
        SymmetryClass::SymmetricTraceless,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::General => "general",
            SymmetryClass::Symmetric => "symmetric",
            SymmetryClass::Alternating => "alternating",
            SymmetryClass::SymmetricTraceless => "symmetric_traceless",
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryClass {
    type Err = TensorError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "general" | "full" => Ok(SymmetryClass::General),
            "symmetric" | "sym" => Ok(SymmetryClass::Symmetric),
            "alternating" | "alt" | "forms" => Ok(SymmetryClass::Alternating),
            "symmetric_traceless" | "traceless" => Ok(SymmetryClass::SymmetricTraceless),
            other => Err(TensorError::Symmetry(format!("unknown symmetry class '{other}'"))),
        }
    }
}

/// Iterates multi-indices (i_1, ..., i_p) in row-major order.
pub struct MultiIndexIter {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl MultiIndexIter {
    pub fn new(n: usize, p: usize) -> Self {
        MultiIndexIter { n, current: vec![0; p], done: n == 0 }
    }
}

impl Iterator for MultiIndexIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let mut a = self.current.len();
        loop {
            if a == 0 {
                self.done = true;
                break;
            }
            a -= 1;
            self.current[a] += 1;
            if self.current[a] < self.n {
                break;
            }
            self.current[a] = 0;
        }
        Some(out)
    }
}

/// Dense covariant p-tensor with row-major multi-index layout.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariantTensor {
    n: usize,
    p: usize,
    components: Vec<f64>,
    class: SymmetryClass,
}

impl CovariantTensor {
    pub fn zeros(n: usize, p: usize) -> Result<Self> {
        check_limits(n, p)?;
        Ok(CovariantTensor { n, p, components: vec![0.0; n.pow(p as u32)], class: SymmetryClass::General })
    }

    pub fn from_components(n: usize, p: usize, components: Vec<f64>) -> Result<Self> {
        check_limits(n, p)?;
        if components.len() != n.pow(p as u32) {
            return Err(TensorError::Shape(format!(
                "expected {} components for n={n}, p={p}, got {}",
                n.pow(p as u32),
                components.len()
            )));
        }
        Ok(CovariantTensor { n, p, components, class: SymmetryClass::General })
    }

    pub fn scalar(n: usize, value: f64) -> Result<Self> {
        Self::from_components(n, 0, vec![value])
    }

    /// The metric g, which is the identity matrix in an orthonormal frame.
    pub fn metric(n: usize) -> Result<Self> {
        let mut t = Self::zeros(n, 2)?;
        for i in 0..n {
            t.components[i * n + i] = 1.0;
        }
        t.class = SymmetryClass::Symmetric;
        Ok(t)
    }

    /// Symmetric 2-tensor from a row-major n×n matrix; fails if not symmetric.
    pub fn symmetric_from_matrix(n: usize, m: &[f64]) -> Result<Self> {
        Self::from_components(n, 2, m.to_vec())?.with_class(SymmetryClass::Symmetric)
    }

    /// Tags the tensor with a class after checking that the class invariants hold.
    pub fn with_class(mut self, class: SymmetryClass) -> Result<Self> {
        let projected = project_symmetry(&self, class)?;
        let scale = self.norm().max(1.0);
        let dev = self
            .components
            .iter()
            .zip(&projected.components)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if dev > CLASS_TOL * scale {
            return Err(TensorError::Symmetry(format!(
                "tensor deviates from class {class} by {dev:e}"
            )));
        }
        self.class = class;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn p(&self) -> usize {
        self.p
    }
    pub fn class(&self) -> SymmetryClass {
        self.class
    }
    pub fn components(&self) -> &[f64] {
        &self.components
    }
    pub fn into_components(self) -> Vec<f64> {
        self.components
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.p);
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.components[self.flat_index(idx)]
    }

    /// Writes one component; the class tag falls back to `General`.
    pub fn set(&mut self, idx: &[usize], v: f64) {
        let k = self.flat_index(idx);
        self.components[k] = v;
        self.class = SymmetryClass::General;
    }

    pub fn norm_sq(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.components.iter_mut().for_each(|x| *x *= s);
        out
    }

    /// Componentwise T + s·U; the class survives only if both classes agree.
    pub fn add_scaled(&self, s: f64, other: &Self) -> Result<Self> {
        same_shape(self, other)?;
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a + s * b).collect();
        let class = if self.class == other.class { self.class } else { SymmetryClass::General };
        Ok(CovariantTensor { n: self.n, p: self.p, components, class })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_shape(self, other)?;
        Ok(self.components.iter().zip(&other.components).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    pub fn multi_indices(&self) -> MultiIndexIter {
        MultiIndexIter::new(self.n, self.p)
    }
}

fn same_shape(t: &CovariantTensor, u: &CovariantTensor) -> Result<()> {
    if t.n != u.n || t.p != u.p {
        return Err(TensorError::Shape(format!("(n={}, p={}) vs (n={}, p={})", t.n, t.p, u.n, u.p)));
    }
    Ok(())
}

/// Pointwise metric pairing of two tensors of the same shape.
pub fn inner_product(t: &CovariantTensor, u: &CovariantTensor) -> Result<f64> {
    same_shape(t, u)?;
    Ok(t.components.iter().zip(&u.components).map(|(a, b)| a * b).sum())
}

/// Contracts slots a and b against the metric.
pub fn trace_g(t: &CovariantTensor, slot_a: usize, slot_b: usize) -> Result<CovariantTensor> {
    if t.p < 2 {
        return Err(TensorError::Order(format!("trace needs p >= 2, got p={}", t.p)));
    }
    for s in [slot_a, slot_b] {
        if s >= t.p {
            return Err(TensorError::Index { slot: s, p: t.p });
        }
    }
    if slot_a == slot_b {
        return Err(TensorError::Index { slot: slot_a, p: t.p });
    }
    let mut out = CovariantTensor::zeros(t.n, t.p - 2)?;
    let mut full = vec![0usize; t.p];
    for (k, rest) in MultiIndexIter::new(t.n, t.p - 2).enumerate() {
        let mut acc = 0.0;
        for i in 0..t.n {
            let mut r = rest.iter();
            for (a, slot) in full.iter_mut().enumerate() {
                *slot = if a == slot_a || a == slot_b { i } else { *r.next().unwrap() };
            }
            acc += t.get(&full);
        }
        out.components[k] = acc;
    }
    Ok(out)
}

fn permutations(p: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..left.len() {
            let x = left.remove(k);
            prefix.push(x);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(k, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..p).collect(), &mut out);
    out.into_iter()
        .map(|perm| {
            let mut inversions = 0;
            for i in 0..p {
                for j in i + 1..p {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (perm, sign)
        })
        .collect()
}

fn average_over_permutations(t: &CovariantTensor, signed: bool) -> CovariantTensor {
    let perms = permutations(t.p);
    let weight = 1.0 / perms.len() as f64;
    let mut out = t.clone();
    let mut permuted = vec![0usize; t.p];
    for (k, idx) in t.multi_indices().enumerate() {
        let mut acc = 0.0;
        for (perm, sign) in &perms {
            for (a, &pa) in perm.iter().enumerate() {
                permuted[a] = idx[pa];
            }
            acc += if signed { sign * t.get(&permuted) } else { t.get(&permuted) };
        }
        out.components[k] = acc * weight;
    }
    out
}

/// Orthonormal basis (as component vectors) of the metric-trace part of the
/// symmetric p-tensors, i.e. the span of sym(g ⊗ ψ).
fn trace_part_basis(n: usize, p: usize) -> Vec<Vec<f64>> {
    if p < 2 {
        return Vec::new();
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let len = n.pow(p as u32);
    for rest in MultiIndexIter::new(n, p - 2) {
        let mut v = CovariantTensor::zeros(n, p).expect("limits checked by caller");
        for i in 0..n {
            let mut idx = vec![i, i];
            idx.extend_from_slice(&rest);
            let k = v.flat_index(&idx);
            v.components[k] += 1.0;
        }
        let mut w = average_over_permutations(&v, false).components;
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-10 {
            w.iter_mut().for_each(|x| *x /= nrm);
            basis.push(w);
        }
        debug_assert!(basis.iter().all(|b| b.len() == len));
    }
    basis
}

/// Orthogonal projection onto the requested subbundle.
pub fn project_symmetry(t: &CovariantTensor, class: SymmetryClass) -> Result<CovariantTensor> {
    let mut out = match class {
        SymmetryClass::General => t.clone(),
        SymmetryClass::Symmetric => average_over_permutations(t, false),
        SymmetryClass::Alternating => average_over_permutations(t, true),
        SymmetryClass::SymmetricTraceless => {
            let mut s = average_over_permutations(t, false);
            for b in trace_part_basis(t.n, t.p) {
                let d: f64 = s.components.iter().zip(&b).map(|(x, y)| x * y).sum();
                s.components.iter_mut().zip(&b).for_each(|(x, y)| *x -= d * y);
            }
            s
        }
    };
    out.class = class;
    Ok(out)
}

/// Orthonormal basis of the class subspace of R^{n^p}, as component vectors.
pub fn class_basis(n: usize, p: usize, class: SymmetryClass) -> Result<Vec<Vec<f64>>> {
    check_limits(n, p)?;
    let len = n.pow(p as u32);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..len {
        let mut e = vec![0.0; len];
        e[k] = 1.0;
        let mut w = project_symmetry(&CovariantTensor::from_components(n, p, e)?, class)?.components;
        for _ in 0..2 {
            for b in &basis {
                let d: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            w.iter_mut().for_each(|x| *x /= nrm);
            basis.push(w);
        }
    }
    Ok(basis)
}

/// Dimension of the class subspace.
pub fn class_dimension(n: usize, p: usize, class: SymmetryClass) -> Result<usize> {
    Ok(class_basis(n, p, class)?.len())
}
