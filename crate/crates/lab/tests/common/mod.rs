#![allow(dead_code)]

use std::io::Write;
use std::sync::Arc;

use holonomy_core::connections::{Bump, BumpTerm, FamilyMember, GeneralizedConnection, IndependentFamily, PrivateSegment, SmoothConnection};
use holonomy_core::linalg::c64;
use holonomy_core::pathgroupoid::{Edge, Point, Vertex};
use holonomy_core::{CMatrix, EdgeId, Graph, Group, GroupDescriptor, VertexId, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One verdict line per criterion, written past the test harness capture.
pub fn verdict(criterion: u32, pass: bool, detail: &str) {
    let line = format!("{} criterion {criterion}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

pub fn cis(theta: f64) -> C64 {
    c64(theta.cos(), theta.sin())
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Scaling-and-squaring Taylor exponential, unrelated to the library's.
pub fn taylor_exp(x: &CMatrix) -> CMatrix {
    let n = x.dim();
    let norm = x.frobenius_norm();
    let mut squarings = 0;
    while norm / f64::from(1u32 << squarings) > 0.25 {
        squarings += 1;
    }
    let y = x.scale_real(1.0 / f64::from(1u32 << squarings));
    let mut term = CMatrix::identity(n);
    let mut sum = CMatrix::identity(n);
    for k in 1..=20 {
        term = (&term * &y).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// The bump profile, written out independently.
pub fn profile(rho: f64, r: f64) -> f64 {
    if rho <= r / 2.0 {
        1.0
    } else if rho >= r {
        0.0
    } else {
        let s = 2.0 * rho / r - 1.0;
        let f = |t: f64| if t <= 0.0 { 0.0 } else { (-1.0 / t).exp() };
        f(1.0 - s) / (f(1.0 - s) + f(s))
    }
}

/// Random traceless skew-Hermitian matrix of Frobenius norm `scale`.
pub fn random_su_algebra<R: Rng>(n: usize, scale: f64, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        }
    }
    let s = m.skew_hermitian_part();
    let tr = s.trace() / n as f64;
    let s = &s - &CMatrix::identity(n).scale(tr);
    let f = s.frobenius_norm();
    s.scale_real(scale / f)
}

pub fn random_connection(group: &Group, terms: usize, seed: u64) -> SmoothConnection {
    let mut r = rng(seed);
    let n = group.dim();
    let mut out = Vec::new();
    for _ in 0..terms {
        let x = group.algebra_element(random_su_algebra(n, 0.5 + 1.5 * r.random::<f64>(), &mut r)).unwrap();
        let center = vec![r.random::<f64>() * 1.2 - 0.1, r.random::<f64>() * 1.2 - 0.1];
        let radius = 0.2 + 0.5 * r.random::<f64>();
        let angle = r.random::<f64>() * std::f64::consts::TAU;
        out.push(BumpTerm::new(x, Bump::new(center, radius).unwrap(), vec![angle.cos(), angle.sin()]).unwrap());
    }
    SmoothConnection::new(group.clone(), out).unwrap()
}

pub fn random_torus_connection(terms: usize, seed: u64) -> SmoothConnection {
    let t1 = Group::torus(1);
    let mut r = rng(seed);
    let terms = (0..terms)
        .map(|_| {
            let x = CMatrix::from_diagonal(&[c64(0.0, 4.0 * (r.random::<f64>() - 0.5))]);
            let b = Bump::new(vec![r.random::<f64>(), r.random::<f64>()], 0.3 + 0.4 * r.random::<f64>()).unwrap();
            BumpTerm::new(t1.algebra_element(x).unwrap(), b, vec![r.random::<f64>() - 0.5, 1.0]).unwrap()
        })
        .collect();
    SmoothConnection::new(t1, terms).unwrap()
}

fn bent(a: &[f64], b: &[f64], bend: f64, samples: usize) -> Vec<Point> {
    let d = [b[0] - a[0], b[1] - a[1]];
    let normal = [-d[1], d[0]];
    (0..=samples)
        .map(|i| {
            let t = i as f64 / samples as f64;
            let h = bend * (std::f64::consts::PI * t).sin();
            vec![a[0] + t * d[0] + h * normal[0], a[1] + t * d[1] + h * normal[1]]
        })
        .collect()
}

/// Unit square with both diagonals: edges 1..4 around, 5 is `0 → 2`, 6 is
/// `1 → 3`.
pub fn square_graph() -> Arc<Graph> {
    let pos = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let vertices = (0..4).map(|i| Vertex { id: VertexId(i), position: Some(pos[i as usize].to_vec()) }).collect();
    let ends = [(0, 1, 0.05), (1, 2, 0.04), (2, 3, 0.03), (3, 0, 0.06), (0, 2, 0.07), (1, 3, -0.05)];
    let edges = ends
        .iter()
        .enumerate()
        .map(|(i, &(s, t, bend))| Edge {
            id: EdgeId(i as u32 + 1),
            source: VertexId(s),
            target: VertexId(t),
            curve: Some(bent(&pos[s as usize], &pos[t as usize], bend, 5)),
        })
        .collect();
    Arc::new(Graph::new(vertices, edges, VertexId(0)).unwrap())
}

/// `r` two-interval spokes from the origin.
pub fn star_graph(r: usize) -> Arc<Graph> {
    let mut vertices = vec![Vertex { id: VertexId(0), position: Some(vec![0.0, 0.0]) }];
    let mut edges = Vec::new();
    for k in 0..r {
        let angle = std::f64::consts::TAU * k as f64 / r as f64;
        let tip = vec![angle.cos(), angle.sin()];
        let mid = vec![0.5 * tip[0], 0.5 * tip[1]];
        vertices.push(Vertex { id: VertexId(k as u32 + 1), position: Some(tip.clone()) });
        edges.push(Edge { id: EdgeId(k as u32 + 1), source: VertexId(0), target: VertexId(k as u32 + 1), curve: Some(vec![vec![0.0, 0.0], mid, tip]) });
    }
    Arc::new(Graph::new(vertices, edges, VertexId(0)).unwrap())
}

pub fn star_family(r: usize) -> IndependentFamily {
    let g = star_graph(r);
    let members = (1..=r as i64)
        .map(|k| FamilyMember { path: g.path_from_signed(&[k]).unwrap(), private: PrivateSegment { letter: 0, interval: 1 } })
        .collect();
    IndependentFamily::new(g, members).unwrap()
}

pub fn bouquet(loops: u32) -> Arc<Graph> {
    let vertices = vec![Vertex { id: VertexId(0), position: None }];
    let edges = (1..=loops).map(|i| Edge { id: EdgeId(i), source: VertexId(0), target: VertexId(0), curve: None }).collect();
    Arc::new(Graph::new(vertices, edges, VertexId(0)).unwrap())
}

pub fn traced_curve(g: &Graph, word: &[i64]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for &s in word {
        let mut c = g.edge_curve(EdgeId(s.unsigned_abs() as u32)).unwrap();
        if s < 0 {
            c.reverse();
        }
        let skip = usize::from(!out.is_empty());
        out.extend(c.into_iter().skip(skip));
    }
    out
}

/// The square graph plus edge 7, a loop at the basepoint running along
/// `α β α⁻¹ β⁻¹` with `α = e1 e2 e3 e4` and `β = e5 e3 e4`.
pub fn commutator_graph() -> Arc<Graph> {
    let sq = square_graph();
    let mut edges = sq.edges().to_vec();
    let word = [1, 2, 3, 4, 5, 3, 4, -4, -3, -2, -1, -4, -3, -5];
    edges.push(Edge { id: EdgeId(7), source: VertexId(0), target: VertexId(0), curve: Some(traced_curve(&sq, &word)) });
    Arc::new(Graph::new(sq.vertices().to_vec(), edges, VertexId(0)).unwrap())
}

pub fn product_t1_su2() -> Group {
    Group::new(GroupDescriptor::Product(vec![GroupDescriptor::Torus(1), GroupDescriptor::SpecialUnitary(2)])).unwrap()
}

/// A `T^1 × SU(2)` connection whose torus part is smooth, then turned by
/// `kick` on edge 7.
pub fn pair_connection(g: &Arc<Graph>, seed: u64, kick: f64) -> GeneralizedConnection {
    let base = product_t1_su2();
    let torus = random_torus_connection(4, seed).edge_holonomies(g.clone(), 64).unwrap();
    let su = GeneralizedConnection::random(g.clone(), Group::special_unitary(2), seed + 77);
    let values = g
        .edge_ids()
        .map(|e| {
            let mut z = torus.value(e).unwrap().matrix()[(0, 0)];
            if e == EdgeId(7) {
                z *= cis(kick);
            }
            let m = CMatrix::block_diagonal(&[CMatrix::from_diagonal(&[z]), su.value(e).unwrap().matrix().clone()]);
            (e, base.element(m).unwrap())
        })
        .collect();
    GeneralizedConnection::new(g.clone(), base, values).unwrap()
}

/// Classical RK4 for `dU/ds = F(s) U` on `[0, 1]`.
pub fn rk4(f: impl Fn(f64) -> CMatrix, n: usize, steps: usize) -> CMatrix {
    let h = 1.0 / steps as f64;
    let mut u = CMatrix::identity(n);
    for j in 0..steps {
        let s = j as f64 * h;
        let k1 = &f(s) * &u;
        let k2 = &f(s + h / 2.0) * &(&u + &k1.scale_real(h / 2.0));
        let k3 = &f(s + h / 2.0) * &(&u + &k2.scale_real(h / 2.0));
        let k4 = &f(s + h) * &(&u + &k3.scale_real(h));
        let incr = &(&(&k1 + &k2.scale_real(2.0)) + &k3.scale_real(2.0)) + &k4;
        u = &u + &incr.scale_real(h / 6.0);
    }
    u
}

/// Raw gauge data: a constant and `(Y, center, radius)` bump terms, with
/// `g(x) = a · exp(Σ φ(x) Y)`.
pub type RawGauge = (CMatrix, Vec<(CMatrix, Vec<f64>, f64)>);

pub fn random_gauge(group: &Group, seed: u64) -> RawGauge {
    let mut r = rng(seed);
    let a = group.haar_sample(seed + 100).into_matrix();
    let terms = (0..3)
        .map(|_| {
            let y = random_su_algebra(group.dim(), 0.5 + r.random::<f64>(), &mut r);
            let c = vec![r.random::<f64>(), r.random::<f64>()];
            (y, c, 0.3 + 0.4 * r.random::<f64>())
        })
        .collect();
    (a, terms)
}

/// Transport of the transformed form `g⁻¹Ag + g⁻¹dg`, with `dg` by central
/// differences, `g` by the Taylor exponential, and RK4 in place of the
/// library integrator.
pub fn transformed_form_oracle(a: &SmoothConnection, gauge: &RawGauge, curve: &[Point]) -> CMatrix {
    let n = a.group().dim();
    let g_at = |x: &[f64]| {
        let mut y = CMatrix::zeros(n);
        for (t, c, r) in &gauge.1 {
            y = &y + &t.scale_real(profile(dist(x, c), *r));
        }
        &gauge.0 * &taylor_exp(&y)
    };
    let eps = 1e-5;
    let mut u = CMatrix::identity(n);
    for w in curve.windows(2) {
        let d: Vec<f64> = w[1].iter().zip(&w[0]).map(|(x, y)| x - y).collect();
        let form = |s: f64| {
            let x: Vec<f64> = w[0].iter().zip(&d).map(|(p, q)| p + s * q).collect();
            let xp: Vec<f64> = x.iter().zip(&d).map(|(p, q)| p + eps * q).collect();
            let xm: Vec<f64> = x.iter().zip(&d).map(|(p, q)| p - eps * q).collect();
            let g = g_at(&x);
            let dg = (&g_at(&xp) - &g_at(&xm)).scale_real(0.5 / eps);
            let ax = a.form_at(&x, &d);
            let transformed = &(&(&g.adjoint() * &ax) * &g) + &(&g.adjoint() * &dg);
            -&transformed
        };
        u = &rk4(form, n, 1000) * &u;
    }
    u
}

/// Quaternion `w + x i + y j + z k` as an `SU(2)` matrix.
pub fn quaternion(w: f64, x: f64, y: f64, z: f64) -> CMatrix {
    CMatrix::from_row_major(2, vec![c64(w, x), c64(y, z), c64(-y, z), c64(w, -x)]).unwrap()
}

/// Unit quaternions with normalized coordinates in `{−1, −½, 0, ½, 1}`
/// conjugating `left` onto `right`.
pub fn grid_conjugators(left: &[CMatrix], right: &[CMatrix]) -> Vec<CMatrix> {
    let grid: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut out = Vec::new();
    for &w in &grid {
        for &x in &grid {
            for &y in &grid {
                for &z in &grid {
                    let norm = (w * w + x * x + y * y + z * z).sqrt();
                    if norm == 0.0 {
                        continue;
                    }
                    let q = quaternion(w / norm, x / norm, y / norm, z / norm);
                    if left.iter().zip(right).all(|(h, h2)| (&(&q.adjoint() * h) * &q).distance(h2) < 1e-12) {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

pub fn all_groups() -> Vec<Group> {
    vec![
        Group::special_unitary(2),
        Group::special_unitary(3),
        Group::unitary(1),
        Group::unitary(2),
        Group::torus(2),
        product_t1_su2(),
        Group::unitary_as_quotient(2),
    ]
}

pub fn data_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}
