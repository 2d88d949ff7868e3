//! Room partition: assign agents to rooms so that no group outgrows the
//! partner numbers of its members.

use crate::error::{Error, Result};

/// `p[i][j]`: how many agents, agent `i` included, may share room `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartnerMatrix {
    pub p: Vec<Vec<usize>>,
}

/// `groups[j]` lists agent indices (rows of the matrix) sent to room `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoomAssignment {
    pub groups: Vec<Vec<usize>>,
}

impl PartnerMatrix {
    pub fn new(p: Vec<Vec<usize>>) -> Result<Self> {
        let m = PartnerMatrix { p };
        m.validate()?;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn m(&self) -> usize {
        self.p.first().map_or(0, |r| r.len())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 || self.m() == 0 || self.p.iter().any(|r| r.len() != self.m()) {
            return Err(Error::Precondition("partner matrix must be a nonempty rectangle".into()));
        }
        if self.p.iter().any(|r| r.iter().sum::<usize>() < n) {
            return Err(Error::InfeasiblePartnerMatrix);
        }
        Ok(())
    }
}

impl RoomAssignment {
    /// True when the groups partition `0..n` and respect the partner numbers.
    pub fn satisfies(&self, pm: &PartnerMatrix) -> bool {
        let n = pm.n();
        let mut seen = vec![false; n];
        for (j, g) in self.groups.iter().enumerate() {
            for &i in g {
                if i >= n || seen[i] || pm.p[i][j] < g.len() {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.iter().all(|s| *s)
    }
}

/// Fills the last room first, greedily by decreasing partner number (ties
/// by ascending index), then recurses on the remaining agents and rooms.
pub fn room_partition(pm: &PartnerMatrix) -> Result<RoomAssignment> {
    pm.validate()?;
    let m = pm.m();
    let mut groups = vec![Vec::new(); m];
    let mut left: Vec<usize> = (0..pm.n()).collect();
    for j in (0..m).rev() {
        if left.is_empty() {
            break;
        }
        if j == 0 {
            groups[0] = left.clone();
            left.clear();
            break;
        }
        let mut order = left.clone();
        order.sort_by(|&a, &b| pm.p[b][j].cmp(&pm.p[a][j]).then(a.cmp(&b)));
        let mut g = Vec::new();
        for &i in &order {
            if pm.p[i][j] > g.len() {
                g.push(i);
            } else {
                break;
            }
        }
        left.retain(|i| !g.contains(i));
        g.sort_unstable();
        groups[j] = g;
    }
    let a = RoomAssignment { groups };
    if !a.satisfies(pm) {
        return Err(Error::Invariant("room partition violated a partner number".into()));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_example() {
        let pm = PartnerMatrix::new(vec![vec![0, 4], vec![2, 2], vec![3, 1], vec![4, 1]]).unwrap();
        let a = room_partition(&pm).unwrap();
        assert_eq!(a.groups, vec![vec![2, 3], vec![0, 1]]);
    }

    #[test]
    fn small_examples() {
        let a = room_partition(&PartnerMatrix::new(vec![vec![1]]).unwrap()).unwrap();
        assert_eq!(a.groups, vec![vec![0]]);
        let a = room_partition(&PartnerMatrix::new(vec![vec![2, 1], vec![2, 1], vec![0, 3]]).unwrap()).unwrap();
        assert_eq!(a.groups, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn infeasible() {
        assert_eq!(PartnerMatrix::new(vec![vec![1, 0], vec![1, 1]]), Err(Error::InfeasiblePartnerMatrix));
    }
}
