use std::sync::OnceLock;

pub const GL_ORDER: usize = 32;

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence.
pub fn gauss_legendre() -> &'static [(f64, f64); GL_ORDER] {
    static RULE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = [(0.0, 0.0); GL_ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// Composite Gauss-Legendre integral of `f` over `[0, 1]` with `pieces`
/// equal subintervals.
pub fn integrate_unit(pieces: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = gauss_legendre();
    let h = 1.0 / pieces as f64;
    let mut total = 0.0;
    for p in 0..pieces {
        let mid = (p as f64 + 0.5) * h;
        for &(x, w) in rule.iter() {
            total += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * total
}
