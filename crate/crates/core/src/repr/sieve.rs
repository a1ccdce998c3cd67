/// Fixed-length bit set over `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_words(len: usize, words: Vec<u64>) -> Option<Self> {
        if words.len() != len.div_ceil(64) {
            return None;
        }
        let mut set = BitSet { len, words };
        set.trim();
        Some(set)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// `self |= other << shift`, truncated to `len`.
    pub fn or_shifted(&mut self, other: &BitSet, shift: usize) {
        let word_shift = shift / 64;
        let bit_shift = shift % 64;
        let n = self.words.len();
        for (w, &src) in other.words.iter().enumerate() {
            if src == 0 {
                continue;
            }
            let target = w + word_shift;
            if target >= n {
                break;
            }
            self.words[target] |= src << bit_shift;
            if bit_shift > 0 && target + 1 < n {
                self.words[target + 1] |= src >> (64 - bit_shift);
            }
        }
        self.trim();
    }

    fn trim(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }
}

/// `layer(j)` holds every `n <= bound` that is a sum of exactly `j`
/// positive squares, for `1 <= j <= max_parts`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpressibilitySieve {
    bound: u64,
    layers: Vec<BitSet>,
}

impl ExpressibilitySieve {
    pub fn build(max_parts: usize, bound: u64) -> Self {
        assert!(max_parts >= 1);
        let len = bound as usize + 1;
        let mut squares = BitSet::new(len);
        let mut a = 1usize;
        while a * a < len {
            squares.set(a * a);
            a += 1;
        }
        let mut layers = vec![squares.clone()];
        for _ in 1..max_parts {
            let prev = layers.last().unwrap();
            let mut next = BitSet::new(len);
            let mut a = 1usize;
            while a * a < len {
                next.or_shifted(prev, a * a);
                a += 1;
            }
            layers.push(next);
        }
        ExpressibilitySieve { bound, layers }
    }

    /// Reassembles a sieve from stored layers; `None` if they do not fit `bound`.
    pub fn from_layers(bound: u64, layers: Vec<BitSet>) -> Option<Self> {
        if layers.is_empty() || layers.iter().any(|l| l.len() != bound as usize + 1) {
            return None;
        }
        Some(ExpressibilitySieve { bound, layers })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn max_parts(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[BitSet] {
        &self.layers
    }

    pub fn layer(&self, parts: usize) -> &BitSet {
        &self.layers[parts - 1]
    }

    pub fn contains(&self, n: u64, parts: usize) -> bool {
        n <= self.bound && self.layer(parts).get(n as usize)
    }
}
