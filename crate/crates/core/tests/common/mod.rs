//! Reference implementations used as test oracles.
#![allow(dead_code)]

use rand::Rng;
use xisim_core::causal::{CausalModel, Cpt, Dag};

/// Adjacency-matrix graph, `adj[u][v]` meaning `u → v`.
#[derive(Debug, Clone)]
pub struct RefGraph {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
}

impl RefGraph {
    pub fn names(&self) -> Vec<String> {
        (0..self.n).map(|i| format!("V{i}")).collect()
    }

    pub fn parents(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.adj[u][v]).collect()
    }

    pub fn to_dag(&self, card: usize) -> Dag {
        let names = self.names();
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if self.adj[u][v] {
                    edges.push((names[u].clone(), names[v].clone()));
                }
            }
        }
        Dag::from_parts(names.iter().map(|s| (s.clone(), card)), edges).unwrap()
    }

    fn acyclic(&self) -> bool {
        // Repeatedly strip sinks.
        let mut alive = vec![true; self.n];
        for _ in 0..self.n {
            let sink = (0..self.n)
                .find(|&v| alive[v] && !(0..self.n).any(|w| alive[w] && self.adj[v][w]));
            match sink {
                Some(v) => alive[v] = false,
                None => return false,
            }
        }
        true
    }

    pub fn descendants(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for (w, reached) in seen.iter_mut().enumerate() {
                if self.adj[u][w] && !*reached {
                    *reached = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Separation by enumerating every simple path of the skeleton.
    pub fn d_separated_by_paths(&self, j: usize, k: usize, l: &[bool]) -> bool {
        let mut path = vec![j];
        let mut on_path = vec![false; self.n];
        on_path[j] = true;
        !self.any_active(&mut path, &mut on_path, k, l)
    }

    fn any_active(&self, path: &mut Vec<usize>, on_path: &mut [bool], k: usize, l: &[bool]) -> bool {
        let last = *path.last().unwrap();
        if last == k {
            return self.path_active(path, l);
        }
        for w in 0..self.n {
            if (self.adj[last][w] || self.adj[w][last]) && !on_path[w] {
                path.push(w);
                on_path[w] = true;
                let found = self.any_active(path, on_path, k, l);
                on_path[w] = false;
                path.pop();
                if found {
                    return true;
                }
            }
        }
        false
    }

    fn path_active(&self, path: &[usize], l: &[bool]) -> bool {
        path.windows(3).all(|w| {
            let (a, v, b) = (w[0], w[1], w[2]);
            if self.adj[a][v] && self.adj[b][v] {
                l[v] || self.descendants(v).iter().zip(l).any(|(&d, &c)| d && c)
            } else {
                !l[v]
            }
        })
    }
}

/// Every labelled DAG on `n` nodes.
pub fn all_dags(n: usize) -> Vec<RefGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for code in 0..3usize.pow(pairs.len() as u32) {
        let mut adj = vec![vec![false; n]; n];
        let mut c = code;
        for &(u, v) in &pairs {
            match c % 3 {
                1 => adj[u][v] = true,
                2 => adj[v][u] = true,
                _ => {}
            }
            c /= 3;
        }
        let g = RefGraph { n, adj };
        if g.acyclic() {
            out.push(g);
        }
    }
    out
}

/// A random binary CPT per node, rows as `[P(0), P(1)]` indexed by parents in ascending order.
pub fn random_binary_cpts(g: &RefGraph, rng: &mut impl Rng) -> Vec<Vec<[f64; 2]>> {
    (0..g.n)
        .map(|v| {
            (0..1usize << g.parents(v).len())
                .map(|_| {
                    let p: f64 = rng.random_range(0.05..0.95);
                    [p, 1.0 - p]
                })
                .collect()
        })
        .collect()
}

pub fn model_from(g: &RefGraph, cpts: &[Vec<[f64; 2]>]) -> CausalModel {
    let names = g.names();
    let list = (0..g.n)
        .map(|v| {
            let parents: Vec<&str> = g.parents(v).iter().map(|&p| names[p].as_str()).collect();
            Cpt::real(names[v].clone(), &parents, cpts[v].iter().map(|r| r.to_vec()).collect())
        })
        .collect();
    CausalModel::new(g.to_dag(2), list).unwrap()
}

/// Joint over binary nodes by direct product; index bit `n−1−v` holds node `v`.
pub fn product_joint(g: &RefGraph, cpts: &[Vec<[f64; 2]>]) -> Vec<f64> {
    let n = g.n;
    (0..1usize << n)
        .map(|idx| {
            let val = |v: usize| (idx >> (n - 1 - v)) & 1;
            (0..n)
                .map(|v| {
                    let row = g.parents(v).iter().fold(0, |acc, &p| acc * 2 + val(p));
                    cpts[v][row][val(v)]
                })
                .product()
        })
        .collect()
}

/// `max |P(j,k|l) − P(j|l)P(k|l)|` over a binary joint laid out as in [`product_joint`].
pub fn ci_gap(n: usize, joint: &[f64], j: usize, k: usize, l: &[usize]) -> f64 {
    let val = |idx: usize, v: usize| (idx >> (n - 1 - v)) & 1;
    let mut worst: f64 = 0.0;
    for lv in 0..1usize << l.len() {
        let matches = |idx: usize| l.iter().enumerate().all(|(i, &v)| val(idx, v) == (lv >> i) & 1);
        let mut table = [[0.0; 2]; 2];
        for (idx, p) in joint.iter().enumerate() {
            if matches(idx) {
                table[val(idx, j)][val(idx, k)] += p;
            }
        }
        let pl: f64 = table.iter().flatten().sum();
        if pl <= 0.0 {
            continue;
        }
        for a in 0..2 {
            for b in 0..2 {
                let pj = (table[a][0] + table[a][1]) / pl;
                let pk = (table[0][b] + table[1][b]) / pl;
                worst = worst.max((table[a][b] / pl - pj * pk).abs());
            }
        }
    }
    worst
}
