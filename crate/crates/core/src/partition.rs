//! Union-find whose classes are numbered by least member.

pub(crate) struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// The smaller root survives, so every root is the least member.
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// `(class of each element, least member of each class)`, classes
    /// numbered in order of least member.
    pub fn classes(mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut number = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut class = Vec::with_capacity(n);
        for x in 0..n {
            let r = self.find(x);
            if number[r] == usize::MAX {
                number[r] = reps.len();
                reps.push(r);
            }
            class.push(number[r]);
        }
        (class, reps)
    }
}
