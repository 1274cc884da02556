//! Factorization in `Q[t]`: Yun's squarefree decomposition followed by
//! Zassenhaus (Berlekamp mod p, quadratic Hensel lifting, subset
//! recombination). Every step is deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::qpoly::QPoly;
use super::zpoly::ZPoly;

/// Squarefree decomposition of a nonzero polynomial: pairs `(a_i, i)` with
/// each `a_i` monic, squarefree, pairwise coprime and
/// `f = lc(f) * prod a_i^i`. Constant factors are omitted.
pub fn squarefree_decomposition(f: &QPoly) -> Vec<(QPoly, u32)> {
    assert!(!f.is_zero(), "squarefree decomposition of zero");
    let f = f.monic();
    if f.is_constant() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.exact_div(&a0);
    let mut c = fp.exact_div(&a0);
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a);
        if b.is_constant() {
            break;
        }
        c = d.exact_div(&a);
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

/// Full factorization into monic irreducibles with multiplicities, sorted by
/// degree and then coefficients. The leading coefficient is not returned.
pub fn factor(f: &QPoly) -> Vec<(QPoly, u32)> {
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for g in irreducible_factors(&part) {
            out.push((g, mult));
        }
    }
    out.sort();
    out
}

/// Monic irreducible factors of a squarefree polynomial.
pub fn irreducible_factors(f: &QPoly) -> Vec<QPoly> {
    let deg = f.degree().expect("nonzero polynomial");
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![f.monic()];
    }
    let (_, prim) = f.primitive_integer_part();
    let mut out: Vec<QPoly> = zassenhaus(&ZPoly::new(prim))
        .into_iter()
        .map(|g| QPoly::from_bigints(&g.0).monic())
        .collect();
    out.sort();
    out
}

pub fn is_irreducible(f: &QPoly) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => {
            let sq = squarefree_decomposition(f);
            sq.len() == 1 && sq[0].1 == 1 && irreducible_factors(f).len() == 1
        }
    }
}

// ---------------------------------------------------------------------------
// arithmetic in F_p[t], p < 2^31

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_from_z(f: &ZPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    fp_trim(
        f.0.iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect(),
    )
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    fp_trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    assert!(!b.is_empty());
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut rem = a.clone();
    let mut quot = vec![0u64; a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            rem[k + j] = (rem[k + j] + p - c * bj % p) % p;
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (fp_trim(quot), fp_trim(rem))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

/// Extended gcd: returns `(s, t)` with `s*a + t*b = 1` for coprime inputs.
fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    assert_eq!(r0.len(), 1, "xgcd of non-coprime polynomials");
    let inv = inv_mod(r0[0], p);
    let sc = |v: &Fp| fp_trim(v.iter().map(|&c| c * inv % p).collect());
    (sc(&s0), sc(&t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    fp_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * (i as u64 % p) % p)
            .collect(),
    )
}

fn fp_powmod(base: &Fp, mut e: u64, modulus: &Fp, p: u64) -> Fp {
    let mut acc = vec![1u64];
    let mut b = fp_divrem(base, modulus, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_divrem(&fp_mul(&acc, &b, p), modulus, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), modulus, p).1;
        e >>= 1;
    }
    acc
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
fn berlekamp(f: &Fp, p: u64) -> Vec<Fp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    // Row i of the Berlekamp matrix is x^(i p) mod f.
    let xp = fp_powmod(&vec![0, 1], p, f, p);
    let mut rows = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    // Kernel of (Q - I)^T.
    let mut a = vec![vec![0u64; n]; n];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            let mut v = row[j];
            if i == j {
                v = (v + p - 1) % p;
            }
            a[j][i] = v;
        }
    }
    let kernel = nullspace_mod(a, p);
    let r = kernel.len();
    let mut factors = vec![f.clone()];
    if r == 1 {
        return factors;
    }
    for v in kernel.iter() {
        let v = fp_trim(v.clone());
        if v.len() <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for u in factors.into_iter() {
            if u.len() <= 2 {
                next.push(u);
                continue;
            }
            let mut pending = vec![u];
            for s in 0..p {
                if next.len() + pending.len() >= r {
                    break;
                }
                let mut shifted = v.clone();
                shifted[0] = (shifted[0] + p - s) % p;
                let mut rest = Vec::new();
                for w in pending.into_iter() {
                    let g = fp_gcd(&w, &shifted, p);
                    if g.len() > 1 && g.len() < w.len() {
                        let h = fp_monic(&fp_divrem(&w, &g, p).0, p);
                        rest.push(g);
                        rest.push(h);
                    } else {
                        rest.push(w);
                    }
                }
                pending = rest;
            }
            next.extend(pending);
        }
        factors = next;
        if factors.len() >= r {
            break;
        }
    }
    factors
}

/// Basis of the right kernel of a square matrix over F_p.
fn nullspace_mod(mut a: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for j in 0..cols {
            a[r][j] = a[r][j] * inv % p;
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = (p - a[ri][fc]) % p;
            }
            v
        })
        .collect()
}

// ---------------------------------------------------------------------------
// arithmetic in (Z / m)[t] with BigInt coefficients kept in [0, m)

fn zm_reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let p = ZPoly::new(a.to_vec()).mul(&ZPoly::new(b.to_vec()));
    zm_reduce(&p.0, m)
}

fn zm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    zm_reduce(&v, m)
}

fn zm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    zm_reduce(&v, m)
}

/// Division by a monic divisor modulo m.
fn zm_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), zm_reduce(a, m));
    }
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] = (&rem[k + j] - &c * bj).mod_floor(m);
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (zm_reduce(&quot, m), zm_reduce(&rem, m))
}

/// One quadratic Hensel step: from `f = g h mod m` and `s g + t h = 1 mod m`
/// to the same relations modulo `m^2`. `h` is monic.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m2: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let e = zm_sub(f, &zm_mul(g, h, m2), m2);
    let (q, r) = zm_divrem_monic(&zm_mul(s, &e, m2), h, m2);
    let g1 = zm_add(&zm_add(g, &zm_mul(t, &e, m2), m2), &zm_mul(&q, g, m2), m2);
    let h1 = zm_add(h, &r, m2);
    let b = zm_sub(
        &zm_add(&zm_mul(s, &g1, m2), &zm_mul(t, &h1, m2), m2),
        &[BigInt::one()],
        m2,
    );
    let (c, d) = zm_divrem_monic(&zm_mul(s, &b, m2), &h1, m2);
    let s1 = zm_sub(s, &d, m2);
    let t1 = zm_sub(&zm_sub(t, &zm_mul(t, &b, m2), m2), &zm_mul(&c, &g1, m2), m2);
    (g1, h1, s1, t1)
}

/// Lifts `f = lc(f) * prod factors (mod p)` to modulus `p^(2^k) >= bound`,
/// returning monic lifted factors and the final modulus.
fn multifactor_lift(f: &ZPoly, factors: &[Fp], p: u64, bound: &BigInt) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut modulus = BigInt::from(p);
    let mut steps = 0;
    while &modulus <= bound {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    let lifted = lift_tree(&f.0, factors, p, steps);
    (lifted, modulus)
}

fn lift_tree(f: &[BigInt], factors: &[Fp], p: u64, steps: u32) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        // f = lc * u: the lifted monic factor is f / lc mod the final modulus.
        let mut m = BigInt::from(p);
        for _ in 0..steps {
            m = &m * &m;
        }
        let lc = f.last().unwrap().mod_floor(&m);
        let inv = lc.modinv(&m).expect("leading coefficient invertible");
        return vec![f.iter().map(|c| (c * &inv).mod_floor(&m)).collect()];
    }
    let k = factors.len() / 2;
    let pb = BigInt::from(p);
    let lc_p = f.last().unwrap().mod_floor(&pb).to_u64().unwrap();
    let mut g_p = vec![lc_p];
    for u in &factors[..k] {
        g_p = fp_mul(&g_p, u, p);
    }
    let mut h_p = vec![1u64];
    for u in &factors[k..] {
        h_p = fp_mul(&h_p, u, p);
    }
    let (s_p, t_p) = fp_xgcd(&g_p, &h_p, p);
    let big = |v: &Fp| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    let (mut g, mut h, mut s, mut t) = (big(&g_p), big(&h_p), big(&s_p), big(&t_p));
    let mut m = pb;
    for _ in 0..steps {
        m = &m * &m;
        let next = hensel_step(f, &g, &h, &s, &t, &m);
        g = next.0;
        h = next.1;
        s = next.2;
        t = next.3;
    }
    // g carries the leading coefficient of f, h is monic.
    let mut out = lift_tree(&g, &factors[..k], p, steps);
    out.extend(lift_tree(&h, &factors[k..], p, steps));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    ZPoly::new(
        a.iter()
            .map(|c| {
                let c = c.mod_floor(m);
                if c > half {
                    c - m
                } else {
                    c
                }
            })
            .collect(),
    )
}

fn choose_prime(f: &ZPoly) -> u64 {
    let lc = f.leading();
    let mut p = 2u64;
    loop {
        if is_prime(p) && !(&lc % BigInt::from(p)).is_zero() {
            let fp = fp_monic(&fp_from_z(f, p), p);
            if fp.len() == f.0.len() {
                let g = fp_gcd(&fp, &fp_derivative(&fp, p), p);
                if g.len() == 1 {
                    return p;
                }
            }
        }
        p += 1;
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors in `Z[t]` of a primitive squarefree polynomial.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let f = f.primitive();
    let n = f.degree().unwrap();
    if n <= 1 {
        return vec![f];
    }
    let p = choose_prime(&f);
    let fp = fp_monic(&fp_from_z(&f, p), p);
    let modular = berlekamp(&fp, p);
    if modular.len() == 1 {
        return vec![f];
    }
    // |coefficients of lc * (any factor)| <= |lc| 2^n ||f||_1
    let bound = BigInt::from(2) * f.leading().abs() * (BigInt::one() << n) * f.norm1();
    let (mut lifted, modulus) = multifactor_lift(&f, &modular, p, &bound);

    let mut remaining = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for subset in combinations(lifted.len(), size) {
            let lc = remaining.leading();
            let mut g: Vec<BigInt> = vec![lc.mod_floor(&modulus)];
            for &i in &subset {
                g = zm_mul(&g, &lifted[i], &modulus);
            }
            let cand = symmetric(&g, &modulus).primitive();
            if cand.degree().unwrap_or(0) == 0 {
                continue;
            }
            if let Some(q) = remaining.div_exact(&cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                remaining = q.primitive();
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, u)| u)
                    .collect();
            }
            None => size += 1,
        }
    }
    if remaining.degree().unwrap_or(0) > 0 {
        found.push(remaining);
    }
    found
}
