/// Disjoint-set forest with union by size and path halving. Each root also
/// tracks the smallest element of its set.
pub(crate) struct Dsu {
    parent: Vec<u32>,
    size: Vec<u32>,
    min: Vec<u32>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            min: (0..n as u32).collect(),
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.min[ra as usize] = self.min[ra as usize].min(self.min[rb as usize]);
    }

    /// Size of the set containing the root `r`.
    pub fn root_size(&self, r: u32) -> u32 {
        self.size[r as usize]
    }

    pub fn root_min(&self, r: u32) -> u32 {
        self.min[r as usize]
    }
}
