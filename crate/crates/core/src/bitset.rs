/// Fixed-capacity bit set used for incidence bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new() -> Self {
        BitSet { words: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let mut b = BitSet::new();
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        let w = i / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| w & (1 << (i % 64)) != 0)
    }

    pub fn intersection(&self, o: &Self) -> Self {
        let mut words: Vec<u64> = self.words.iter().zip(&o.words).map(|(a, b)| a & b).collect();
        while words.last() == Some(&0) {
            words.pop();
        }
        BitSet { words }
    }

    pub fn is_subset(&self, o: &Self) -> bool {
        self.words.iter().enumerate().all(|(i, w)| w & !o.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| wi * 64 + b))
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut b = BitSet::new();
        for i in iter {
            b.insert(i);
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops() {
        let a: BitSet = [1, 5, 70].into_iter().collect();
        let b: BitSet = [5, 70, 3].into_iter().collect();
        let c = a.intersection(&b);
        assert_eq!(c.iter().collect::<Vec<_>>(), vec![5, 70]);
        assert!(c.is_subset(&a) && !a.is_subset(&b));
        assert_eq!(BitSet::full(3).len(), 3);
        assert!(a.intersection(&[2].into_iter().collect()).is_empty());
    }
}
