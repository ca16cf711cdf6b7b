//! Adaptive Gauss-Kronrod (7, 15) quadrature on finite intervals.

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One panel: Kronrod estimate and `|Kronrod - Gauss|`.
fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

#[derive(Clone, Copy, Debug)]
pub struct Quad {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for Quad {
    fn default() -> Self {
        Quad {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_panels: 20_000,
        }
    }
}

/// Value and estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Quad {
    pub fn tol(abs_tol: f64, rel_tol: f64) -> Self {
        Quad {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    /// Integrate `f` over `[a, b]`, bisecting the panel with the largest error.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64, a: f64, b: f64) -> Estimate {
        if a == b {
            return Estimate {
                value: 0.0,
                error: 0.0,
            };
        }
        let (v, e) = gk15(&mut f, a, b);
        let mut panels = vec![(a, b, v, e)];
        let (mut total, mut err) = (v, e);
        while err > self.abs_tol.max(self.rel_tol * total.abs()) && panels.len() < self.max_panels {
            let (i, _) = panels
                .iter()
                .enumerate()
                .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
                .expect("nonempty");
            let (lo, hi, pv, pe) = panels.swap_remove(i);
            let mid = 0.5 * (lo + hi);
            let (v1, e1) = gk15(&mut f, lo, mid);
            let (v2, e2) = gk15(&mut f, mid, hi);
            total += v1 + v2 - pv;
            err += e1 + e2 - pe;
            panels.push((lo, mid, v1, e1));
            panels.push((mid, hi, v2, e2));
        }
        // Re-sum to shed the drift of the running totals.
        let value = panels.iter().map(|p| p.2).sum();
        let error = panels.iter().map(|p| p.3).sum();
        Estimate { value, error }
    }
}

pub fn integrate(f: impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    Quad::default().integrate(f, a, b).value
}
