//! Exhaustive 3-coloring search for small graphs.
//!
//! Both searches walk colorings in lexicographic order (vertex 0 most
//! significant, B < R < Y) with pruning that never skips a lexicographically
//! earlier optimum, so their answers are deterministic.

use serde::Serialize;

use super::{Color, Coloring, Edge, Graph};
use crate::error::{Error, Result};

pub const MAX_EXHAUSTIVE_VERTICES: usize = 20;

/// A coloring with the fewest monochromatic edges, and those edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NearColoring {
    pub coloring: Coloring,
    pub bad_edges: Vec<Edge>,
}

/// Neighbours with a smaller index, the only ones already colored when a
/// vertex is assigned.
fn earlier_neighbours(g: &Graph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for &(u, v) in g.edges() {
        adj[v].push(u);
    }
    adj
}

fn check_size(g: &Graph) -> Result<()> {
    if g.vertex_count() > MAX_EXHAUSTIVE_VERTICES {
        return Err(Error::TooLarge(g.vertex_count()));
    }
    Ok(())
}

pub fn brute_force_3color(g: &Graph) -> Result<Option<Coloring>> {
    check_size(g)?;
    let back = earlier_neighbours(g);
    let mut colors = Vec::with_capacity(g.vertex_count());
    let found = extend_proper(&back, &mut colors);
    Ok(found.then(|| Coloring::new(colors)))
}

fn extend_proper(back: &[Vec<usize>], colors: &mut Vec<Color>) -> bool {
    let v = colors.len();
    if v == back.len() {
        return true;
    }
    for c in Color::ALL {
        if back[v].iter().all(|&u| colors[u] != c) {
            colors.push(c);
            if extend_proper(back, colors) {
                return true;
            }
            colors.pop();
        }
    }
    false
}

pub fn best_near_coloring(g: &Graph) -> Result<NearColoring> {
    check_size(g)?;
    let back = earlier_neighbours(g);
    let mut search = NearSearch { back: &back, colors: Vec::new(), best: None };
    search.descend(0);
    let (_, colors) = search.best.expect("the empty graph search visits at least one leaf");
    let coloring = Coloring::new(colors);
    let bad_edges = coloring.monochromatic_edges(g)?;
    Ok(NearColoring { coloring, bad_edges })
}

struct NearSearch<'a> {
    back: &'a [Vec<usize>],
    colors: Vec<Color>,
    best: Option<(usize, Vec<Color>)>,
}

impl NearSearch<'_> {
    fn descend(&mut self, bad: usize) {
        // Only a strictly better leaf can replace the incumbent, which is
        // lexicographically earlier than anything still to be visited.
        if let Some((best, _)) = &self.best {
            if bad >= *best {
                return;
            }
        }
        let v = self.colors.len();
        if v == self.back.len() {
            self.best = Some((bad, self.colors.clone()));
            return;
        }
        for c in Color::ALL {
            let added = self.back[v].iter().filter(|&&u| self.colors[u] == c).count();
            self.colors.push(c);
            self.descend(bad + added);
            self.colors.pop();
            if matches!(self.best, Some((0, _))) {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_valid_3coloring;

    /// Plain 3^n enumeration in lexicographic order.
    fn enumerate(n: usize) -> impl Iterator<Item = Coloring> {
        (0..3usize.pow(n as u32)).map(move |mut code| {
            let mut idx = vec![0; n];
            for slot in idx.iter_mut().rev() {
                *slot = code % 3;
                code /= 3;
            }
            Coloring::from_indices(&idx).unwrap()
        })
    }

    fn oracle_min_bad(g: &Graph) -> (usize, Coloring) {
        enumerate(g.vertex_count())
            .map(|c| (c.monochromatic_edges(g).unwrap().len(), c))
            .min_by_key(|(bad, _)| *bad)
            .unwrap()
    }

    #[test]
    fn k4_is_not_3_colorable() {
        let k4 = Graph::complete(4);
        assert_eq!(brute_force_3color(&k4).unwrap(), None);
        let near = best_near_coloring(&k4).unwrap();
        assert_eq!(near.bad_edges.len(), 1);
        assert_eq!(oracle_min_bad(&k4).0, 1);
    }

    #[test]
    fn k3_first_solution_is_bry() {
        let c = brute_force_3color(&Graph::complete(3)).unwrap().unwrap();
        assert_eq!(c, Coloring::new(vec![Color::B, Color::R, Color::Y]));
    }

    #[test]
    fn c5_and_petersen_colorable() {
        for g in [Graph::cycle(5), Graph::petersen()] {
            let c = brute_force_3color(&g).unwrap().expect("3-colorable");
            assert!(is_valid_3coloring(&g, &c).unwrap());
            assert!(best_near_coloring(&g).unwrap().bad_edges.is_empty());
        }
    }

    #[test]
    fn wheel_has_one_bad_edge() {
        let w5 = Graph::wheel(5);
        assert_eq!(brute_force_3color(&w5).unwrap(), None);
        let near = best_near_coloring(&w5).unwrap();
        assert_eq!(near.bad_edges.len(), 1);
        let (bad, first) = oracle_min_bad(&w5);
        assert_eq!(bad, 1);
        assert_eq!(near.coloring, first);
    }

    #[test]
    fn matches_enumeration_on_small_graphs() {
        let graphs = [
            Graph::complete(3),
            Graph::complete(4),
            Graph::complete(5),
            Graph::cycle(4),
            Graph::cycle(7),
            Graph::wheel(4),
            Graph::wheel(6),
            Graph::new(4, []).unwrap(),
        ];
        for g in graphs {
            let (bad, first) = oracle_min_bad(&g);
            let near = best_near_coloring(&g).unwrap();
            assert_eq!(near.bad_edges.len(), bad, "{g:?}");
            assert_eq!(near.coloring, first, "{g:?}");
            let proper = brute_force_3color(&g).unwrap();
            assert_eq!(proper.is_some(), bad == 0);
            if let Some(c) = proper {
                assert_eq!(c, first);
            }
        }
    }

    #[test]
    fn size_limit() {
        let g = Graph::new(21, []).unwrap();
        assert_eq!(brute_force_3color(&g), Err(Error::TooLarge(21)));
        assert!(best_near_coloring(&g).is_err());
    }
}
