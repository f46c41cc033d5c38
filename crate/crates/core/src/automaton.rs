//! Partial inverse automata over a free alphabet with union-find merging.
//!
//! Columns are letter codes; an edge `u --l--> v` is stored both as
//! `table[u][l] = v` and `table[v][l⁻¹] = u`. Merging two states folds every
//! pair of equally labelled edges that the merge creates.

pub(crate) const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct FoldingTable {
    pub width: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
}

impl FoldingTable {
    pub fn new(width: usize) -> Self {
        FoldingTable { width, table: Vec::new(), parent: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn add_state(&mut self) -> u32 {
        let s = self.parent.len() as u32;
        self.parent.push(s);
        self.table.extend(std::iter::repeat_n(NONE, self.width));
        s
    }

    pub fn find(&mut self, mut c: u32) -> u32 {
        while self.parent[c as usize] != c {
            let up = self.parent[self.parent[c as usize] as usize];
            self.parent[c as usize] = up;
            c = up;
        }
        c
    }

    pub fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    pub fn get(&mut self, c: u32, x: usize) -> u32 {
        let t = self.table[c as usize * self.width + x];
        if t == NONE {
            NONE
        } else {
            self.find(t)
        }
    }

    /// Sets both directions of one edge without folding.
    pub fn link(&mut self, u: u32, x: usize, v: u32) {
        self.table[u as usize * self.width + x] = v;
        self.table[v as usize * self.width + (x ^ 1)] = u;
    }

    /// Adds `u --x--> v`, folding if either slot is already taken.
    pub fn add_edge(&mut self, u: u32, x: usize, v: u32) -> usize {
        let (u, v) = (self.find(u), self.find(v));
        let existing = self.get(u, x);
        if existing != NONE {
            return self.merge(existing, v);
        }
        let back = self.get(v, x ^ 1);
        if back != NONE {
            return self.merge(back, u);
        }
        self.link(u, x, v);
        0
    }

    /// Identifies two states and folds the consequences. Returns the number
    /// of merges performed. The smaller id survives.
    pub fn merge(&mut self, a: u32, b: u32) -> usize {
        let mut merges = 0;
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            let (x, y) = (self.find(x), self.find(y));
            if x == y {
                continue;
            }
            let (keep, kill) = (x.min(y), x.max(y));
            self.parent[kill as usize] = keep;
            merges += 1;
            for col in 0..self.width {
                let t = self.table[kill as usize * self.width + col];
                if t == NONE {
                    continue;
                }
                let t = self.find(t);
                let existing = self.get(keep, col);
                if existing == NONE {
                    self.table[keep as usize * self.width + col] = t;
                } else if existing != t {
                    queue.push((existing, t));
                }
                let back = self.get(t, col ^ 1);
                if back == NONE {
                    self.table[t as usize * self.width + (col ^ 1)] = keep;
                } else if back != keep {
                    queue.push((back, keep));
                }
            }
        }
        merges
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_labels_fold() {
        let mut t = FoldingTable::new(4);
        let s: Vec<u32> = (0..3).map(|_| t.add_state()).collect();
        t.add_edge(s[0], 0, s[1]);
        assert_eq!(t.add_edge(s[0], 0, s[2]), 1);
        assert_eq!(t.find(s[2]), t.find(s[1]));
        assert_eq!(t.get(s[0], 0), t.find(s[1]));
    }
}
