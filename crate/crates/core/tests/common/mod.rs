#![allow(dead_code)]

use std::sync::Arc;

use holonomy_core::connections::{Bump, BumpTerm, SmoothConnection};
use holonomy_core::linalg::c64;
use holonomy_core::pathgroupoid::{Edge, Point, Vertex};
use holonomy_core::{CMatrix, EdgeId, Graph, Group, VertexId, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exponential by Taylor series after scaling, then squaring. Deliberately
/// unrelated to the library's eigen-based exponential.
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

/// Same profile as the library's bumps, written out independently.
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

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Random skew-Hermitian traceless matrix with Frobenius norm `scale`.
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
        let x = random_su_algebra(n, 0.5 + 1.5 * r.random::<f64>(), &mut r);
        let x = group.algebra_element(x).unwrap();
        let center = vec![r.random::<f64>() * 1.2 - 0.1, r.random::<f64>() * 1.2 - 0.1];
        let radius = 0.2 + 0.5 * r.random::<f64>();
        let angle = r.random::<f64>() * std::f64::consts::TAU;
        out.push(BumpTerm::new(x, Bump::new(center, radius).unwrap(), vec![angle.cos(), angle.sin()]).unwrap());
    }
    SmoothConnection::new(group.clone(), out).unwrap()
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

/// Unit square with both diagonals: 4 vertices, 6 slightly bent edges.
/// Edges 1..4 run around the square, 5 is the diagonal `0 → 2`, 6 the
/// diagonal `1 → 3`.
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

/// A star of `r` straight spokes from the basepoint at the origin, each
/// spoke a two-interval polyline; spokes point in distinct directions.
pub fn star_graph(r: usize) -> Arc<Graph> {
    let mut vertices = vec![Vertex { id: VertexId(0), position: Some(vec![0.0, 0.0]) }];
    let mut edges = Vec::new();
    for k in 0..r {
        let angle = std::f64::consts::TAU * k as f64 / r as f64;
        let tip = vec![angle.cos(), angle.sin()];
        let mid = vec![0.5 * tip[0], 0.5 * tip[1]];
        vertices.push(Vertex { id: VertexId(k as u32 + 1), position: Some(tip.clone()) });
        edges.push(Edge {
            id: EdgeId(k as u32 + 1),
            source: VertexId(0),
            target: VertexId(k as u32 + 1),
            curve: Some(vec![vec![0.0, 0.0], mid, tip]),
        });
    }
    Arc::new(Graph::new(vertices, edges, VertexId(0)).unwrap())
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).max_abs()
}

pub fn cis(theta: f64) -> C64 {
    c64(theta.cos(), theta.sin())
}

/// Concatenates the curves of a signed edge word into one polyline.
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

/// The square graph plus edge 7, a loop at the basepoint whose curve runs
/// along `α β α⁻¹ β⁻¹` with `α = e1 e2 e3 e4` and `β = e5 e3 e4`. Any extra
/// `(id, source, target, word)` edges are traced the same way.
pub fn traced_graph(extra: &[(u32, u32, u32, Vec<i64>)]) -> Arc<Graph> {
    let sq = square_graph();
    let mut edges = sq.edges().to_vec();
    let mut all = vec![(7, 0, 0, vec![1, 2, 3, 4, 5, 3, 4, -4, -3, -2, -1, -4, -3, -5])];
    all.extend_from_slice(extra);
    for (id, s, t, word) in all {
        edges.push(Edge { id: EdgeId(id), source: VertexId(s), target: VertexId(t), curve: Some(traced_curve(&sq, &word)) });
    }
    Arc::new(Graph::new(sq.vertices().to_vec(), edges, VertexId(0)).unwrap())
}

pub fn commutator_graph() -> Arc<Graph> {
    traced_graph(&[])
}
