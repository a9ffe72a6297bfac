//! Monomial bookkeeping for symmetric powers of the section space: dense
//! lex-ordered bases per degree with multiplication index maps.

use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub nvars: usize,
    pub maxdeg: usize,
    /// exponent vectors per degree, lex order
    pub lists: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, maxdeg: usize) -> Self {
        let mut lists = Vec::with_capacity(maxdeg + 1);
        let mut index = Vec::with_capacity(maxdeg + 1);
        for d in 0..=maxdeg {
            let mut list = Vec::new();
            let mut current = vec![0u8; nvars];
            gen_exponents(nvars, d, 0, &mut current, &mut list);
            let map = list
                .iter()
                .enumerate()
                .map(|(i, m)| (m.clone(), i))
                .collect();
            lists.push(list);
            index.push(map);
        }
        MonomialBasis {
            nvars,
            maxdeg,
            lists,
            index,
        }
    }

    pub fn count(&self, d: usize) -> usize {
        self.lists[d].len()
    }

    pub fn index_of(&self, d: usize, expo: &[u8]) -> usize {
        self.index[d][expo]
    }

    /// Index in degree d+1 of (monomial #idx in degree d) times variable v.
    pub fn times_var(&self, d: usize, idx: usize, var: usize) -> usize {
        let mut e = self.lists[d][idx].clone();
        e[var] += 1;
        self.index_of(d + 1, &e)
    }

    /// Index of the product of two monomials.
    pub fn mul_index(&self, d1: usize, i1: usize, d2: usize, i2: usize) -> usize {
        let a = &self.lists[d1][i1];
        let b = &self.lists[d2][i2];
        let e: Vec<u8> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.index_of(d1 + d2, &e)
    }
}

fn gen_exponents(
    nvars: usize,
    remaining: usize,
    var: usize,
    current: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    if var == nvars - 1 {
        current[var] = remaining as u8;
        out.push(current.clone());
        current[var] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[var] = e as u8;
        gen_exponents(nvars, remaining - e, var + 1, current, out);
    }
    current[var] = 0;
}
