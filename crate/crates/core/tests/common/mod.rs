//! Reference integrators shared by the integration and acceptance tests.
//! Deliberately independent of the library: own series start, own
//! right-hand side, fixed-step classical RK4.
#![allow(dead_code)]

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geom {
    Planar,
    Radial,
}

/// State `(z, z', curv)` at `x`.
#[derive(Debug, Clone, Copy)]
pub struct Ref {
    pub x: f64,
    pub z: f64,
    pub dz: f64,
    pub curv: f64,
    /// Stopped at a positive minimum rather than at the floor.
    pub turned: bool,
}

fn start(g: Geom, gamma: f64, a: f64, x: f64) -> [f64; 3] {
    match g {
        Geom::Planar => {
            let c = gamma / ((1.0 + a) * (2.0 + a) * (3.0 + a));
            [
                1.0 - x * x / 2.0 + c * x.powf(3.0 + a),
                -x + c * (3.0 + a) * x.powf(2.0 + a),
                -1.0 + c * (3.0 + a) * (2.0 + a) * x.powf(1.0 + a),
            ]
        }
        Geom::Radial => {
            let c = gamma / ((1.0 + a) * (3.0 + a) * (3.0 + a));
            let z2 = -0.5 + c * (3.0 + a) * (2.0 + a) * x.powf(1.0 + a);
            let z1 = -x / 2.0 + c * (3.0 + a) * x.powf(2.0 + a);
            [1.0 - x * x / 4.0 + c * x.powf(3.0 + a), z1, z2 + z1 / x]
        }
    }
}

fn f(g: Geom, gamma: f64, a: f64, x: f64, s: [f64; 3]) -> [f64; 3] {
    let third = gamma * x.powf(a) / s[0].powf(1.0 + a);
    match g {
        Geom::Planar => [s[1], s[2], third],
        Geom::Radial => [s[1], s[2] - s[1] / x, third],
    }
}

fn rk4(g: Geom, gamma: f64, a: f64, x: f64, s: [f64; 3], h: f64) -> [f64; 3] {
    let add = |s: [f64; 3], k: [f64; 3], c: f64| [s[0] + c * k[0], s[1] + c * k[1], s[2] + c * k[2]];
    let k1 = f(g, gamma, a, x, s);
    let k2 = f(g, gamma, a, x + h / 2.0, add(s, k1, h / 2.0));
    let k3 = f(g, gamma, a, x + h / 2.0, add(s, k2, h / 2.0));
    let k4 = f(g, gamma, a, x + h, add(s, k3, h));
    let mut out = s;
    for i in 0..3 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Fixed-step RK4 from the series start at `x = h` until the next step would
/// take `z` below `z_stop`, or until `z'` turns non-negative.
pub fn integrate(g: Geom, gamma: f64, a: f64, h: f64, z_stop: f64) -> Ref {
    let mut x = h;
    let mut s = start(g, gamma, a, x);
    loop {
        let n = rk4(g, gamma, a, x, s, h);
        if !(n[0] > z_stop) || n.iter().any(|v| !v.is_finite()) {
            return Ref { x, z: s[0], dz: s[1], curv: s[2], turned: false };
        }
        x += h;
        s = n;
        if s[1] >= 0.0 {
            return Ref { x, z: s[0], dz: s[1], curv: s[2], turned: true };
        }
    }
}

/// Remaining distance to `z = 0` for a finite contact slope, from the
/// two-term local form `z = m s + B s^{2-a}` with
/// `B = γ y^a / (m^{1+a} a(1-a)(2-a))`.
pub fn finite_angle_gap(st: &Ref, gamma: f64, a: f64) -> (f64, f64) {
    let (mut s, mut m) = (st.z / -st.dz, -st.dz);
    for _ in 0..50 {
        let b = gamma * (st.x + s).powf(a) / (m.powf(1.0 + a) * a * (1.0 - a) * (2.0 - a));
        m = -st.dz - (2.0 - a) * b * s.powf(1.0 - a);
        // solve m s + b s^{2-a} = z by Newton
        for _ in 0..20 {
            let r = m * s + b * s.powf(2.0 - a) - st.z;
            s -= r / (m + (2.0 - a) * b * s.powf(1.0 - a));
        }
    }
    (s, m)
}

/// Remaining distance for a zero contact angle, `z = C s^p` with
/// `p = 3/(2+a)`: `s = p z / (-z')`.
pub fn zero_angle_gap(st: &Ref, a: f64) -> f64 {
    3.0 / (2.0 + a) * st.z / -st.dz
}

/// Position and slope where the last state reaches `z = floor`, by a
/// second-order Taylor step.
pub fn crossing(st: &Ref, g: Geom, floor: f64) -> (f64, f64) {
    let d2 = match g {
        Geom::Planar => st.curv,
        Geom::Radial => st.curv - st.dz / st.x,
    };
    let mut d = (st.z - floor) / -st.dz;
    for _ in 0..20 {
        let r = st.z + st.dz * d + 0.5 * d2 * d * d - floor;
        d -= r / (st.dz + d2 * d);
    }
    (st.x + d, st.dz + d2 * d)
}
