//! Stabilizer generators and elements of graph states as symbolic Pauli words.

use crate::error::{Error, Result};
use crate::graph::{Bipartition, Graph};

/// `i^phase ⊗_q σ(x_q, z_q)` with `σ(1,0) = X`, `σ(0,1) = Z`, `σ(1,1) = Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliWord {
    pub n: usize,
    pub x_mask: usize,
    pub z_mask: usize,
    pub phase_power: u8,
}

#[inline]
fn pc(m: usize) -> u32 {
    m.count_ones()
}

impl PauliWord {
    pub fn identity(n: usize) -> Self {
        PauliWord { n, x_mask: 0, z_mask: 0, phase_power: 0 }
    }

    /// Qubits carrying a Y factor.
    pub fn y_mask(&self) -> usize {
        self.x_mask & self.z_mask
    }

    /// Product `self · other` with the phase tracked mod 4.
    pub fn mul(&self, o: &PauliWord) -> PauliWord {
        debug_assert_eq!(self.n, o.n);
        // In X^x Z^z form each word carries i^(k + |x&z|); moving Z^z1 past X^x2 costs (-1)^|z1&x2|.
        let x = self.x_mask ^ o.x_mask;
        let z = self.z_mask ^ o.z_mask;
        let e = self.phase_power as u32
            + o.phase_power as u32
            + pc(self.y_mask())
            + pc(o.y_mask())
            + 2 * pc(self.z_mask & o.x_mask);
        let k = (e + 4 * 64 - pc(x & z)) % 4;
        PauliWord { n: self.n, x_mask: x, z_mask: z, phase_power: k as u8 }
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase_power % 2 == 0
    }

    /// `+1` or `-1` prefactor; `None` for a phase of `±i`.
    pub fn sign(&self) -> Option<f64> {
        match self.phase_power {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }
}

/// `g_i = X_i ∏_{k ∈ N(i)} Z_k`.
pub fn generator_word(g: &Graph, i: usize) -> Result<PauliWord> {
    if i >= g.n() {
        return Err(Error::VertexOutOfRange { v: i, n: g.n() });
    }
    Ok(PauliWord { n: g.n(), x_mask: 1 << i, z_mask: g.nbr_mask(i), phase_power: 0 })
}

/// `∏_{i ∈ x} g_i`, multiplied in increasing generator order.
pub fn stab_element(g: &Graph, x: usize) -> PauliWord {
    let mut w = PauliWord::identity(g.n());
    for i in crate::graph::bits(x) {
        w = w.mul(&PauliWord { n: g.n(), x_mask: 1 << i, z_mask: g.nbr_mask(i), phase_power: 0 });
    }
    assert!(w.is_hermitian(), "stabilizer element {x:#b} has phase i^{}", w.phase_power);
    w
}

/// Z-part of the stabilizer element for generator mask `x`.
pub fn z_of(g: &Graph, x: usize) -> usize {
    crate::graph::bits(x).fold(0, |z, i| z ^ g.nbr_mask(i))
}

/// `-1` iff an odd number of qubits in `M` carry a Y factor.
pub fn pt_sign(g: &Graph, x: usize, m: &Bipartition) -> f64 {
    if pc(x & z_of(g, x) & m.mask()) % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Graph-basis XOR masks of `Z_k` and of `∏_{j ∈ N(k)} Z_j`.
pub fn flip_mask(g: &Graph, k: usize) -> Result<(usize, usize)> {
    if k >= g.n() {
        return Err(Error::VertexOutOfRange { v: k, n: g.n() });
    }
    Ok((1 << k, g.nbr_mask(k)))
}

/// `ymask[x] = x & z(x)` for every generator mask, built incrementally.
pub fn ymask_table(g: &Graph) -> Vec<usize> {
    let dim = g.dim();
    let mut z = vec![0usize; dim];
    let mut y = vec![0usize; dim];
    for x in 1..dim {
        let low = x.trailing_zeros() as usize;
        z[x] = z[x & (x - 1)] ^ g.nbr_mask(low);
        y[x] = x & z[x];
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;

    #[test]
    fn generators() {
        let l3 = Graph::named(&Family::Linear(3)).unwrap();
        let w = generator_word(&l3, 1).unwrap();
        assert_eq!((w.x_mask, w.z_mask, w.phase_power), (0b010, 0b101, 0));
        let e = Graph::new(2, []).unwrap();
        assert_eq!(generator_word(&e, 0).unwrap().z_mask, 0);
        let s = Graph::named(&Family::Star(4)).unwrap();
        assert_eq!(generator_word(&s, 0).unwrap().z_mask, 0b1110);
        assert!(generator_word(&s, 4).is_err());
    }

    #[test]
    fn elements() {
        let bell = Graph::named(&Family::Linear(2)).unwrap();
        assert_eq!(stab_element(&bell, 0), PauliWord::identity(2));
        // (X Z)(Z X) = (XZ) ⊗ (ZX) = (-iY) ⊗ (iY) = Y ⊗ Y
        let w = stab_element(&bell, 0b11);
        assert_eq!((w.x_mask, w.z_mask, w.phase_power), (0b11, 0b11, 0));
        let l4 = Graph::named(&Family::Linear(4)).unwrap();
        let w = stab_element(&l4, 0b1001);
        assert_eq!((w.x_mask, w.z_mask, w.phase_power), (0b1001, 0b0110, 0));
    }

    #[test]
    fn pt_signs() {
        let bell = Graph::named(&Family::Linear(2)).unwrap();
        let m0 = Bipartition::new(2, 0b01).unwrap();
        assert_eq!(pt_sign(&bell, 0, &m0), 1.0);
        assert_eq!(pt_sign(&bell, 0b11, &m0), -1.0);
        let l4 = Graph::named(&Family::Linear(4)).unwrap();
        for m in crate::graph::canonical_masks(4) {
            assert_eq!(pt_sign(&l4, 0b1001, &Bipartition::new(4, m).unwrap()), 1.0);
        }
    }

    #[test]
    fn flips() {
        let s = Graph::named(&Family::Star(4)).unwrap();
        assert_eq!(flip_mask(&s, 0).unwrap(), (1, 0b1110));
        assert_eq!(flip_mask(&s, 2).unwrap(), (0b100, 0b0001));
    }

    #[test]
    fn ymask_matches_words() {
        let g = Graph::named(&Family::Ring(5)).unwrap();
        let t = ymask_table(&g);
        for (x, &y) in t.iter().enumerate() {
            assert_eq!(y, stab_element(&g, x).y_mask());
        }
    }
}
