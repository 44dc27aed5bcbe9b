use std::f64::consts::PI;

/// Orthonormal real Fourier basis on N equispaced points (N even):
/// 1/√N, then √(2/N)cos(kx), √(2/N)sin(kx) for 0 < k < N/2, then (−1)^j/√N.
#[derive(Debug, Clone)]
pub(crate) struct RealFourier {
    /// Row-major: row r is basis vector r.
    pub basis: Vec<f64>,
    pub modes: Vec<Mode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Constant,
    Cos(usize),
    Sin(usize),
    Nyquist,
}

impl Mode {
    pub fn wavenumber(self, n: usize) -> usize {
        match self {
            Mode::Constant => 0,
            Mode::Cos(k) | Mode::Sin(k) => k,
            Mode::Nyquist => n / 2,
        }
    }
}

impl RealFourier {
    pub fn new(n: usize) -> Self {
        let mut modes = vec![Mode::Constant];
        for k in 1..n / 2 {
            modes.push(Mode::Cos(k));
            modes.push(Mode::Sin(k));
        }
        modes.push(Mode::Nyquist);
        let a = (1.0 / n as f64).sqrt();
        let b = (2.0 / n as f64).sqrt();
        let mut basis = vec![0.0; n * n];
        for (r, m) in modes.iter().enumerate() {
            for j in 0..n {
                let x = 2.0 * PI * j as f64 / n as f64;
                basis[r * n + j] = match *m {
                    Mode::Constant => a,
                    Mode::Cos(k) => b * (k as f64 * x).cos(),
                    Mode::Sin(k) => b * (k as f64 * x).sin(),
                    Mode::Nyquist => {
                        if j % 2 == 0 {
                            a
                        } else {
                            -a
                        }
                    }
                };
            }
        }
        RealFourier { basis, modes }
    }
}

/// Spectral first-derivative matrix on N points of a period-L circle with the
/// Nyquist mode zeroed. Exactly antisymmetric.
pub(crate) fn derivative_matrix(n: usize, period: f64) -> Vec<f64> {
    let scale = 2.0 * PI / period;
    // d[m] = −(2/N) Σ_{0<k<N/2} k sin(2πkm/N) · 2π/L, for offset m = j − l.
    let mut d = vec![0.0; n];
    for m in 1..=n / 2 {
        let mut acc = 0.0;
        for k in 1..n / 2 {
            acc += k as f64 * (2.0 * PI * (k * m) as f64 / n as f64).sin();
        }
        d[m] = -2.0 / n as f64 * acc * scale;
        if m < n - m {
            d[n - m] = -d[m];
        }
    }
    if n % 2 == 0 {
        d[n / 2] = 0.0;
    }
    let mut out = vec![0.0; n * n];
    for j in 0..n {
        for l in 0..n {
            out[j * n + l] = d[(j + n - l) % n];
        }
    }
    out
}
