//! Tiny finite fields GF(q), q in {2,3,4,5,7,8,9}, with multiplication via
//! log/antilog tables. Elements are encoded as integers 0..q-1; for prime
//! powers the encoding is the base-p digit vector of the polynomial
//! representative.

use crate::error::{Error, Result};

/// Irreducible polynomials used for the extension fields, low digits first:
/// GF(4) = F2[x]/(x^2+x+1), GF(8) = F2[x]/(x^3+x+1), GF(9) = F3[x]/(x^2+x+2).
fn modulus(q: u32) -> Option<(u32, u32, &'static [u32])> {
    match q {
        2 | 3 | 5 | 7 => Some((q, 1, &[])),
        4 => Some((2, 2, &[1, 1])),
        8 => Some((2, 3, &[1, 1, 0])),
        9 => Some((3, 2, &[2, 1])),
        _ => None,
    }
}

#[derive(Clone)]
pub struct Field {
    pub q: u32,
    pub p: u32,
    pub f: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Vec<u32>,
    frob: Vec<u32>,
}

impl Field {
    pub fn new(q: u32) -> Result<Field> {
        let (p, f, poly) = modulus(q).ok_or(Error::UnsupportedField(q))?;
        let digits = |mut v: u32| -> Vec<u32> {
            let mut d = vec![0; f as usize];
            for slot in d.iter_mut() {
                *slot = v % p;
                v /= p;
            }
            d
        };
        let encode = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let add = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            encode(
                &da.iter()
                    .zip(&db)
                    .map(|(x, y)| (x + y) % p)
                    .collect::<Vec<_>>(),
            )
        };
        // polynomial product reduced by the modulus
        let raw_mul = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u32; 2 * f as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            for i in (f as usize..prod.len()).rev() {
                let c = prod[i];
                if c != 0 {
                    prod[i] = 0;
                    for (k, &m) in poly.iter().enumerate() {
                        let idx = i - f as usize + k;
                        prod[idx] = (prod[idx] + c * (p - m % p)) % p;
                    }
                }
            }
            encode(&prod[..f as usize])
        };
        // find a multiplicative generator, build the tables from it
        let mut exp = Vec::new();
        let mut log = vec![0u32; q as usize];
        let mut generator = if q == 2 { 1 } else { 0 };
        for cand in 2..q {
            let mut seen = vec![false; q as usize];
            let mut x = 1u32;
            let mut count = 0;
            loop {
                if seen[x as usize] {
                    break;
                }
                seen[x as usize] = true;
                count += 1;
                x = raw_mul(x, cand);
            }
            if count == q - 1 {
                generator = cand;
                break;
            }
        }
        debug_assert!(generator != 0, "every finite field has a generator");
        let mut x = 1u32;
        for i in 0..q - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = raw_mul(x, generator);
        }
        let mut add_table = vec![0u32; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                add_table[(a * q + b) as usize] = add(a, b);
            }
        }
        let mut frob = vec![0u32; q as usize];
        for (a, slot) in frob.iter_mut().enumerate() {
            let mut y = a as u32;
            for _ in 1..p {
                y = raw_mul(y, a as u32);
            }
            *slot = y;
        }
        Ok(Field {
            q,
            p,
            f,
            exp,
            log,
            add_table,
            frob,
        })
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add_table[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[((self.log[a as usize] + self.log[b as usize]) % (self.q - 1)) as usize]
        }
    }

    /// A fixed multiplicative generator.
    pub fn generator(&self) -> u32 {
        self.exp[1.min(self.exp.len() - 1)]
    }

    /// Frobenius x -> x^p.
    #[inline]
    pub fn frobenius(&self, a: u32) -> u32 {
        self.frob[a as usize]
    }

    /// The basis 1, x, x^2, ... of GF(q) over GF(p) (as encoded elements).
    pub fn prime_basis(&self) -> Vec<u32> {
        (0..self.f).map(|k| self.p.pow(k)).collect()
    }
}
