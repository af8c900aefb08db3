//! Spin-z product basis conventions shared by every module.
//!
//! A basis state of an `N`-site ring is a `usize` bitmask `b`. Bit `j` of `b`
//! is set exactly when the spin at site `j` points up, which is the same as a
//! Jordan-Wigner fermion being present at site `j`. The all-down state (the
//! fermionic vacuum) is index `0`; the all-up state is `2^N - 1`.

/// Dimension `2^N` of the Hilbert space of `sites` qubits.
#[inline]
pub fn dimension(sites: usize) -> usize {
    1usize << sites
}

#[inline]
pub fn is_up(state: usize, site: usize) -> bool {
    state >> site & 1 == 1
}

/// Number of up spins (fermions).
#[inline]
pub fn ups(state: usize) -> usize {
    state.count_ones() as usize
}

/// Number of down spins among all `sites`.
#[inline]
pub fn downs(state: usize, sites: usize) -> usize {
    sites - ups(state & (dimension(sites) - 1))
}

/// Number of down spins strictly below `site`, i.e. the Jordan-Wigner string
/// length for an operator acting on `site`.
#[inline]
pub fn downs_below(state: usize, site: usize) -> usize {
    site - ups(state & ((1usize << site) - 1))
}

/// Gathers the bits of `state` selected by `mask` into the low bits of the
/// result, preserving site order.
#[inline]
pub fn compact_bits(state: usize, mask: usize) -> usize {
    let mut out = 0usize;
    let mut m = mask;
    let mut pos = 0;
    while m != 0 {
        let site = m.trailing_zeros() as usize;
        out |= (state >> site & 1) << pos;
        pos += 1;
        m &= m - 1;
    }
    out
}

/// Next larger integer with the same popcount (Gosper's hack).
#[inline]
fn next_same_popcount(x: usize) -> usize {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// All `sites`-bit masks with exactly `count` bits set, in ascending numeric
/// order (colexicographic order of the set-bit positions).
pub fn masks_with_popcount(sites: usize, count: usize) -> Vec<usize> {
    if count > sites {
        return Vec::new();
    }
    if count == 0 {
        return vec![0];
    }
    let limit = dimension(sites);
    let mut out = Vec::new();
    let mut x = (1usize << count) - 1;
    while x < limit {
        out.push(x);
        x = next_same_popcount(x);
    }
    out
}

/// Positions of the set bits of `state`, ascending.
pub fn occupied_sites(state: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(ups(state));
    let mut m = state;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Binomial coefficient for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
