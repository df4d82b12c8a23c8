/// Growable bitset over `u64` values, one bit per value.
#[derive(Clone, Debug, Default)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn with_capacity(bits: u64) -> Self {
        BitSet {
            words: vec![0; Self::words_for(bits)],
        }
    }

    fn words_for(bits: u64) -> usize {
        (bits as usize).div_ceil(64)
    }

    /// Number of representable values; everything at or past it reads as unset.
    pub fn capacity(&self) -> u64 {
        self.words.len() as u64 * 64
    }

    pub fn grow_to(&mut self, bits: u64) {
        let need = Self::words_for(bits);
        if need > self.words.len() {
            self.words.resize(need, 0);
        }
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        match self.words.get((v >> 6) as usize) {
            Some(w) => (w >> (v & 63)) & 1 == 1,
            None => false,
        }
    }

    /// Sets bit `v`, growing by doubling if needed.
    #[inline]
    pub fn insert(&mut self, v: u64) {
        let w = (v >> 6) as usize;
        if w >= self.words.len() {
            let target = (w + 1).max(self.words.len() * 2);
            self.words.resize(target, 0);
        }
        self.words[w] |= 1 << (v & 63);
    }

    pub fn remove(&mut self, v: u64) {
        if let Some(w) = self.words.get_mut((v >> 6) as usize) {
            *w &= !(1 << (v & 63));
        }
    }

    pub fn heap_bytes(&self) -> usize {
        self.words.capacity() * 8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_grows_and_reads_back() {
        let mut b = BitSet::with_capacity(10);
        assert_eq!(b.capacity(), 64);
        b.insert(3);
        b.insert(1000);
        assert!(b.contains(3) && b.contains(1000));
        assert!(!b.contains(999) && !b.contains(1 << 40));
        assert!(b.capacity() > 1000);
        b.remove(3);
        assert!(!b.contains(3));
    }
}
