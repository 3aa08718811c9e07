//! Golden-section search for unimodal maximization on a closed interval.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineMax {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Maximizes a unimodal `f` on `[lo, hi]` until the bracket is narrower than
/// `tol`. The returned point is the best evaluated one, endpoints included.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> LineMax
where
    F: FnMut(f64) -> f64,
{
    assert!(lo <= hi, "empty bracket [{lo}, {hi}]");
    assert!(tol > 0.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while b - a > tol {
        let width = b - a;
        iterations += 1;
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
        if b - a >= width {
            // bracket below floating-point resolution
            break;
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    LineMax {
        x: best.0,
        value: best.1,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_peak() {
        let m = golden_section_max(|x| -(x - 0.3).powi(2), 0.0, 1.0, 1e-10);
        assert!((m.x - 0.3).abs() < 1e-9);
        assert!(m.iterations > 10);
    }

    #[test]
    fn monotone_function_hits_endpoint() {
        let m = golden_section_max(|x| -x, 2.0, 5.0, 1e-9);
        assert_eq!(m.x, 2.0);
        let m = golden_section_max(|x| x.ln(), 2.0, 5.0, 1e-9);
        assert_eq!(m.x, 5.0);
    }

    #[test]
    fn tolerance_below_resolution_terminates() {
        let m = golden_section_max(|x| -(x - 1.0).powi(2), 0.5, 1.0, 1e-30);
        assert!((m.x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_bracket() {
        let m = golden_section_max(|x| x * x, 1.5, 1.5, 1e-9);
        assert_eq!((m.x, m.value, m.iterations), (1.5, 2.25, 0));
    }
}
