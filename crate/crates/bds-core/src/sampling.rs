//! Seeded generators for systems and graphs, plus exhaustive small-system
//! enumeration. Everything here is deterministic given the seed, so test
//! suites built on these generators are reproducible byte for byte.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, GraphSpec};
use crate::system::Bds;

/// Seed used by the command-line tools when none is given.
pub const DEFAULT_SEED: u64 = 0x00BD_5EED;

fn label_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("l{i}")
    }
}

/// Random system with `1..=max_atoms` atoms and `1..=max_labels` labels;
/// each dual-map cell is undefined with probability 0.3.
pub fn random_bds(rng: &mut impl Rng, max_atoms: usize, max_labels: usize) -> Bds {
    let n = rng.random_range(1..=max_atoms);
    let l = rng.random_range(1..=max_labels);
    let maps = (0..l)
        .map(|_| {
            (0..n)
                .map(|_| rng.random_bool(0.7).then(|| rng.random_range(0..n)))
                .collect()
        })
        .collect();
    let atoms = (0..n).map(|i| format!("x{i}")).collect();
    let labels = (0..l).map(label_name).collect();
    Bds::new(atoms, labels, maps).expect("generated systems are well formed")
}

/// One-shot convenience over [`random_bds`] with a fresh stream per seed.
pub fn random_bds_from_seed(seed: u64, max_atoms: usize, max_labels: usize) -> Bds {
    random_bds(&mut ChaCha8Rng::seed_from_u64(seed), max_atoms, max_labels)
}

/// Every system with exactly `1..=max_atoms` atoms and `0..=max_labels`
/// labels, enumerating all `(n+1)^(n·l)` assignments of dual-map cells.
/// Asserts the total stays under ten million.
pub fn all_small_bds(max_atoms: usize, max_labels: usize) -> Vec<Bds> {
    let mut total: u128 = 0;
    for n in 1..=max_atoms {
        for l in 0..=max_labels {
            total += ((n + 1) as u128).pow((n * l) as u32);
        }
    }
    assert!(total < 10_000_000, "exhaustive enumeration of {total} systems");

    let mut out = Vec::with_capacity(total as usize);
    for n in 1..=max_atoms {
        let atoms: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        for l in 0..=max_labels {
            let labels: Vec<String> = (0..l).map(label_name).collect();
            let cells = n * l;
            let base = n + 1;
            let count = (base as u64).pow(cells as u32);
            for code in 0..count {
                let mut c = code;
                let mut maps = vec![vec![None; n]; l];
                for cell in 0..cells {
                    let digit = (c % base as u64) as usize;
                    c /= base as u64;
                    if digit > 0 {
                        maps[cell / n][cell % n] = Some(digit - 1);
                    }
                }
                out.push(
                    Bds::new(atoms.clone(), labels.clone(), maps)
                        .expect("enumerated systems are well formed"),
                );
            }
        }
    }
    out
}

/// Random multigraph with `1..=max_vertices` vertices and `0..=max_edges`
/// uniformly random edges.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize, max_edges: usize) -> GraphSpec {
    let v = rng.random_range(1..=max_vertices);
    let e = rng.random_range(0..=max_edges);
    let vertices: Vec<String> = (0..v).map(|i| format!("v{i}")).collect();
    let edges = (0..e)
        .map(|i| Edge {
            name: format!("e{i}"),
            source: vertices[rng.random_range(0..v)].clone(),
            range: vertices[rng.random_range(0..v)].clone(),
        })
        .collect();
    GraphSpec::new(vertices, edges).expect("generated graphs are well formed")
}

/// Random graph in which every vertex on a cycle has out-degree one, so the
/// boundary-path space is finite: disjoint terminal cycles fed by a random
/// acyclic region.
pub fn random_exit_free_graph(rng: &mut impl Rng, max_vertices: usize) -> GraphSpec {
    let total = rng.random_range(1..=max_vertices);
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);

    let on_cycles = rng.random_range(0..=total);
    let (cycle_pool, dag) = order.split_at(on_cycles);
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut rest = cycle_pool;
    while !rest.is_empty() {
        let c = rng.random_range(1..=rest.len());
        let (cycle, tail) = rest.split_at(c);
        cycles.push(cycle.to_vec());
        rest = tail;
    }

    let vertices: Vec<String> = (0..total).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<Edge> = Vec::new();
    let push = |edges: &mut Vec<Edge>, s: usize, r: usize| {
        let name = format!("e{}", edges.len());
        edges.push(Edge { name, source: vertices[s].clone(), range: vertices[r].clone() });
    };
    for cycle in &cycles {
        for (i, &v) in cycle.iter().enumerate() {
            push(&mut edges, v, cycle[(i + 1) % cycle.len()]);
        }
    }
    // Acyclic region: edges point to later region vertices or into cycles.
    let cycle_vertices: Vec<usize> = cycles.iter().flatten().copied().collect();
    for (i, &v) in dag.iter().enumerate() {
        let candidates: Vec<usize> =
            dag[i + 1..].iter().chain(cycle_vertices.iter()).copied().collect();
        if candidates.is_empty() {
            continue;
        }
        for _ in 0..rng.random_range(0..=2usize) {
            push(&mut edges, v, candidates[rng.random_range(0..candidates.len())]);
        }
    }
    GraphSpec::new(vertices, edges).expect("generated graphs are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a = random_bds_from_seed(DEFAULT_SEED, 6, 3);
        let b = random_bds_from_seed(DEFAULT_SEED, 6, 3);
        assert_eq!(a, b);
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(random_graph(&mut r1, 6, 10), random_graph(&mut r2, 6, 10));
        let mut r1 = ChaCha8Rng::seed_from_u64(9);
        let mut r2 = ChaCha8Rng::seed_from_u64(9);
        assert_eq!(
            random_exit_free_graph(&mut r1, 5),
            random_exit_free_graph(&mut r2, 5)
        );
    }

    #[test]
    fn exhaustive_counts() {
        // One atom: per label count l the maps form 2^l assignments.
        let ones: Vec<Bds> =
            all_small_bds(1, 2).into_iter().filter(|s| s.atom_count() == 1).collect();
        assert_eq!(ones.len(), 1 + 2 + 4);
        let all = all_small_bds(3, 2);
        let three_two = all
            .iter()
            .filter(|s| s.atom_count() == 3 && s.label_count() == 2)
            .count();
        assert_eq!(three_two, 4096);
        // No duplicates in the enumeration.
        let mut seen = std::collections::HashSet::new();
        for sys in &all {
            assert!(seen.insert(format!("{:?}", sys)));
        }
    }

    #[test]
    fn exit_free_family_has_no_cycle_exits() {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        for _ in 0..200 {
            let g = random_exit_free_graph(&mut rng, 5);
            crate::graph::boundary_paths(&g).expect("family stays exit-free");
        }
    }
}
