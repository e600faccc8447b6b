//! Matrix exponential by truncated Taylor series with scaling and squaring.
//! Works on plain arrays and shares no code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use exchange_budget::linalg::Complex64 as C;

pub type M4 = [[C; 4]; 4];

const Z: C = C::new(0.0, 0.0);

pub fn zero() -> M4 {
    [[Z; 4]; 4]
}

pub fn identity() -> M4 {
    let mut m = zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

pub fn mul(a: &M4, b: &M4) -> M4 {
    let mut out = zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn add(a: &M4, b: &M4) -> M4 {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn scale(a: &M4, k: C) -> M4 {
    a.map(|row| row.map(|x| x * k))
}

fn norm_inf(a: &M4) -> f64 {
    a.iter()
        .map(|row| row.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `σ1·σ2 / 4` written out from the single-qubit Paulis.
pub fn spin_dot() -> M4 {
    let i = C::new(0.0, 1.0);
    let o = C::new(1.0, 0.0);
    let paulis: [[[C; 2]; 2]; 3] = [[[Z, o], [o, Z]], [[Z, -i], [i, Z]], [[o, Z], [Z, -o]]];
    let mut out = zero();
    for p in &paulis {
        for r in 0..4 {
            for c in 0..4 {
                out[r][c] += p[r / 2][c / 2] * p[r % 2][c % 2] * 0.25;
            }
        }
    }
    out
}

pub fn expm(a: &M4) -> M4 {
    let norm = norm_inf(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = scale(a, C::new(2f64.powi(-squarings), 0.0));
    let mut sum = identity();
    let mut term = identity();
    for k in 1..40 {
        term = scale(&mul(&term, &b), C::new(1.0 / k as f64, 0.0));
        sum = add(&sum, &term);
        if norm_inf(&term) < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// `exp(-iθ s1·s2)`.
pub fn exchange_oracle(theta: f64) -> M4 {
    expm(&scale(&spin_dot(), C::new(0.0, -theta)))
}

pub fn max_diff(a: &M4, b: &exchange_budget::linalg::ComplexMat) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            d = d.max((a[i][j] - b.get(i, j)).norm());
        }
    }
    d
}
