//! Gauss–Legendre quadrature: fixed rules, composite panel doubling and a
//! cumulative (running-integral) table with adaptive panels.

use std::sync::OnceLock;

/// Points per panel of the composite rule.
pub const PANEL_ORDER: usize = 16;

#[derive(Debug, Clone)]
pub struct GaussRule {
    /// Abscissae on [-1, 1], ascending.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Legendre roots by Newton iteration on the three-term recurrence.
    pub fn legendre(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, z);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussRule { nodes, weights }
    }

    /// Applies the rule on [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub fn panel_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::legendre(PANEL_ORDER))
}

/// Composite rule with `panels` equal panels. Panel sums are accumulated
/// left to right, so the result does not depend on anything but the inputs.
pub fn composite<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = panel_rule();
    let w = (b - a) / panels as f64;
    let mut total = 0.0;
    let mut comp = 0.0;
    for k in 0..panels {
        let lo = a + w * k as f64;
        let hi = if k + 1 == panels { b } else { a + w * (k + 1) as f64 };
        // Kahan summation over panels.
        let y = rule.integrate(&mut f, lo, hi) - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    total
}

#[derive(Debug, Clone, Copy)]
pub struct DoublingOptions {
    pub rel_tol: f64,
    pub max_nodes: usize,
    pub min_panels: usize,
}

impl Default for DoublingOptions {
    fn default() -> Self {
        DoublingOptions { rel_tol: 1e-12, max_nodes: 1 << 14, min_panels: 1 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    /// Magnitude of the change on the last doubling.
    pub est_error: f64,
    pub nodes: usize,
    pub converged: bool,
}

/// Composite Gauss–Legendre with panel doubling until the relative change
/// drops below `rel_tol` or `max_nodes` is reached.
pub fn integrate_doubling<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &DoublingOptions) -> Integral {
    if a == b {
        return Integral { value: 0.0, est_error: 0.0, nodes: 0, converged: true };
    }
    let max_panels = (opts.max_nodes / PANEL_ORDER).max(1);
    let mut panels = opts.min_panels.max(1);
    let mut prev = composite(&mut f, a, b, panels);
    let mut last_change = prev.abs();
    loop {
        let next_panels = panels * 2;
        if next_panels > max_panels {
            return Integral { value: prev, est_error: last_change, nodes: panels * PANEL_ORDER, converged: false };
        }
        let cur = composite(&mut f, a, b, next_panels);
        let change = (cur - prev).abs();
        panels = next_panels;
        if change <= opts.rel_tol * cur.abs() || (cur == 0.0 && prev == 0.0) {
            return Integral { value: cur, est_error: change, nodes: panels * PANEL_ORDER, converged: true };
        }
        last_change = change;
        prev = cur;
    }
}

/// Running integral G(v) = ∫_a^v g over adaptively sized panels.
///
/// Panels are accepted when the 16-point rule on the whole panel agrees with
/// the sum over its two halves; partial integrals inside a panel reuse the
/// same rule on the sub-interval.
#[derive(Debug, Clone)]
pub struct CumulativeTable {
    pub edges: Vec<f64>,
    /// Integral from `edges[0]` to `edges[k]`.
    pub cumulative: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct TableOptions {
    pub rel_tol: f64,
    /// Absolute floor for the panel acceptance test.
    pub abs_tol: f64,
    pub initial_width: f64,
    pub min_width: f64,
    pub max_width: f64,
}

impl CumulativeTable {
    /// Builds panels from `a` toward `b` (which may be infinite) and stops at
    /// `b` or as soon as the running integral reaches `stop_at`.
    pub fn build<F: FnMut(f64) -> f64>(mut g: F, a: f64, b: f64, stop_at: Option<f64>, opts: &TableOptions) -> Self {
        let rule = panel_rule();
        let mut edges = vec![a];
        let mut cumulative = vec![0.0];
        let mut width = opts.initial_width.min(opts.max_width);
        let mut x = a;
        let mut total = 0.0;
        let mut guard = 0usize;
        while x < b && guard < 1_000_000 {
            guard += 1;
            if let Some(stop) = stop_at {
                if total >= stop {
                    break;
                }
            }
            let hi = (x + width).min(b);
            let whole = rule.integrate(&mut g, x, hi);
            let mid = 0.5 * (x + hi);
            let halves = rule.integrate(&mut g, x, mid) + rule.integrate(&mut g, mid, hi);
            let scale = total.abs() + halves.abs();
            if (whole - halves).abs() <= (opts.rel_tol * scale).max(opts.abs_tol) || (hi - x) <= opts.min_width {
                total += halves;
                x = hi;
                edges.push(x);
                cumulative.push(total);
                width = (width * 1.5).min(opts.max_width);
            } else {
                width = 0.5 * (hi - x);
            }
        }
        CumulativeTable { edges, cumulative }
    }

    pub fn start(&self) -> f64 {
        self.edges[0]
    }

    pub fn end(&self) -> f64 {
        *self.edges.last().unwrap()
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// ∫_{start}^{v} g. `v` is clamped to the table range.
    pub fn integral_to<F: FnMut(f64) -> f64>(&self, g: F, v: f64) -> f64 {
        let v = v.clamp(self.start(), self.end());
        let k = match self.edges.binary_search_by(|e| e.partial_cmp(&v).unwrap()) {
            Ok(k) => return self.cumulative[k],
            Err(k) => k - 1,
        };
        self.cumulative[k] + panel_rule().integrate(g, self.edges[k], v)
    }

    /// Integrates `h(v, G(v))` over the table range, panel by panel.
    pub fn integrate_with_running<G, H>(&self, mut g: G, mut h: H) -> f64
    where
        G: FnMut(f64) -> f64,
        H: FnMut(f64, f64) -> f64,
    {
        let rule = panel_rule();
        let mut total = 0.0;
        for k in 0..self.edges.len() - 1 {
            let (lo, hi) = (self.edges[k], self.edges[k + 1]);
            let base = self.cumulative[k];
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let mut sum = 0.0;
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let v = mid + half * x;
                let running = base + rule.integrate(&mut g, lo, v);
                sum += w * h(v, running);
            }
            total += sum * half;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussRule::legendre(16);
        let wsum: f64 = rule.weights.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // degree 31 is the exactness limit
        let v = rule.integrate(|x| x.powi(30), -1.0, 1.0);
        assert!((v - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn doubling_converges_on_smooth_integrand() {
        let r = integrate_doubling(|x: f64| x.cos(), 0.0, std::f64::consts::FRAC_PI_2, &DoublingOptions::default());
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cumulative_table_matches_antiderivative() {
        let opts =
            TableOptions { rel_tol: 1e-14, abs_tol: 1e-16, initial_width: 0.1, min_width: 1e-12, max_width: 1.0 };
        let t = CumulativeTable::build(|x: f64| x.exp(), 0.0, 3.0, None, &opts);
        assert!((t.total() - (3f64.exp() - 1.0)).abs() < 1e-12);
        let part = t.integral_to(|x: f64| x.exp(), 1.234);
        assert!((part - (1.234f64.exp() - 1.0)).abs() < 1e-13);
        let second = t.integrate_with_running(|x: f64| x.exp(), |_v, g| g);
        // ∫_0^3 (e^v - 1) dv
        assert!((second - (3f64.exp() - 1.0 - 3.0)).abs() < 1e-11);
    }

    #[test]
    fn cumulative_table_stops_at_level() {
        let opts = TableOptions {
            rel_tol: 1e-13,
            abs_tol: 1e-15,
            initial_width: 0.5,
            min_width: 1e-12,
            max_width: f64::INFINITY,
        };
        let t = CumulativeTable::build(|_x: f64| 2.0, 0.0, f64::INFINITY, Some(40.0), &opts);
        assert!(t.total() >= 40.0);
        assert!(t.end() >= 20.0);
    }
}
