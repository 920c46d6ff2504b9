//! The group SL(3,Z) ⋉ Z³ acting on (z, x⃗) by
//! (A, n⃗)(z, x⃗) = (z + n⃗·x⃗, A x⃗), with its standard generators
//! e_{i,j} (elementary matrices) and t_i (translations), the composition
//! law that makes the action a homomorphism, and the defining relation
//! list verified by exact matrix arithmetic.

use super::poly::{Poly, NVARS};
use super::ratfunc::RatFunc;

/// 3×3 integer matrix, row-major.
pub type Mat3 = [[i64; 3]; 3];

pub const ID3: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn mat_det(a: &Mat3) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Inverse via the adjugate; requires det = 1.
pub fn mat_inv(a: &Mat3) -> Mat3 {
    debug_assert_eq!(mat_det(a), 1);
    let c = |i: usize, j: usize| -> i64 {
        let r = [(i + 1) % 3, (i + 2) % 3];
        let s = [(j + 1) % 3, (j + 2) % 3];
        a[r[0]][s[0]] * a[r[1]][s[1]] - a[r[0]][s[1]] * a[r[1]][s[0]]
    };
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = c(j, i); // transpose of cofactors
        }
    }
    out
}

fn mat_transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

fn mat_vec(a: &Mat3, v: &[i64; 3]) -> [i64; 3] {
    let mut out = [0i64; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += a[i][j] * v[j];
        }
    }
    out
}

/// An element (A, n⃗) of SL(3,Z) ⋉ Z³.
///
/// The composition law (A,n)(B,m) = (AB, m + Bᵀn) is forced by requiring
/// g ↦ (the action on (z,x⃗)) to be a homomorphism.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GroupElem {
    pub a: Mat3,
    pub n: [i64; 3],
}

impl GroupElem {
    pub fn identity() -> GroupElem {
        GroupElem { a: ID3, n: [0; 3] }
    }

    pub fn new(a: Mat3, n: [i64; 3]) -> GroupElem {
        assert_eq!(mat_det(&a), 1, "matrix part must have determinant 1");
        GroupElem { a, n }
    }

    pub fn mul(&self, other: &GroupElem) -> GroupElem {
        let a = mat_mul(&self.a, &other.a);
        let tn = mat_vec(&mat_transpose(&other.a), &self.n);
        let n = [
            other.n[0] + tn[0],
            other.n[1] + tn[1],
            other.n[2] + tn[2],
        ];
        GroupElem { a, n }
    }

    pub fn inv(&self) -> GroupElem {
        let ai = mat_inv(&self.a);
        let tn = mat_vec(&mat_transpose(&ai), &self.n);
        GroupElem {
            a: ai,
            n: [-tn[0], -tn[1], -tn[2]],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == GroupElem::identity()
    }

    pub fn is_translation(&self) -> bool {
        self.a == ID3
    }

    /// Variable images of the forward action (z, x⃗) ↦ (z + n⃗·x⃗, A x⃗),
    /// for substitution into polynomials.
    pub fn action_images(&self) -> [Poly; NVARS] {
        let mut z = Poly::var(0);
        for (i, ni) in self.n.iter().enumerate() {
            z = z.add(&Poly::var(i + 1).scale(&super::poly::rat(*ni, 1)));
        }
        let xs: Vec<Poly> = (0..3)
            .map(|i| {
                let mut p = Poly::zero();
                for j in 0..3 {
                    p = p.add(&Poly::var(j + 1).scale(&super::poly::rat(self.a[i][j], 1)));
                }
                p
            })
            .collect();
        [z, xs[0].clone(), xs[1].clone(), xs[2].clone()]
    }
}

/// ρ(g) f = f ∘ g⁻¹: the module action on functions of (z, x⃗).
pub fn act(g: &GroupElem, f: &RatFunc) -> RatFunc {
    f.subst(&g.inv().action_images())
}

/// Generator names: E(i,j) with 1-based indices i ≠ j, and T(i).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gen {
    E(usize, usize),
    T(usize),
}

impl Gen {
    pub fn elem(&self) -> GroupElem {
        match *self {
            Gen::E(i, j) => {
                assert!(i != j && (1..=3).contains(&i) && (1..=3).contains(&j));
                let mut a = ID3;
                a[i - 1][j - 1] = 1;
                GroupElem { a, n: [0; 3] }
            }
            Gen::T(i) => {
                assert!((1..=3).contains(&i));
                let mut n = [0i64; 3];
                n[i - 1] = 1;
                GroupElem { a: ID3, n }
            }
        }
    }
}

/// A word over the generators with exponents ±1, kept freely reduced.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Word {
    letters: Vec<(Gen, i8)>,
}

impl Word {
    pub fn new() -> Word {
        Word::default()
    }

    pub fn from_letters(letters: &[(Gen, i8)]) -> Word {
        let mut w = Word::new();
        for &(g, e) in letters {
            w.push(g, e);
        }
        w
    }

    pub fn push(&mut self, g: Gen, e: i8) {
        assert!(e == 1 || e == -1);
        if let Some(&(lg, le)) = self.letters.last() {
            if lg == g && le == -e {
                self.letters.pop();
                return;
            }
        }
        self.letters.push((g, e));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::new();
        for &(g, e) in self.letters.iter().rev() {
            w.push(g, -e);
        }
        w
    }

    pub fn pow(&self, k: u32) -> Word {
        let mut w = Word::new();
        for _ in 0..k {
            w = w.concat(self);
        }
        w
    }

    pub fn letters(&self) -> &[(Gen, i8)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Image in the group.
    pub fn elem(&self) -> GroupElem {
        let mut g = GroupElem::identity();
        for &(gen, e) in &self.letters {
            let h = gen.elem();
            g = g.mul(&if e == 1 { h } else { h.inv() });
        }
        g
    }
}

pub fn word(letters: &[(Gen, i8)]) -> Word {
    Word::from_letters(letters)
}

/// One defining relation: a word mapping to the identity.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub word: Word,
}

/// The defining relation list.
///
/// Commutation of elementary matrices holds for j ≠ k and i ≠ l (checked
/// by matrix arithmetic below; the weaker index condition sometimes
/// quoted admits non-commuting pairs such as e_{1,2}, e_{3,1}).
pub fn relation_list() -> Vec<Relation> {
    use Gen::{E, T};
    let mut rels: Vec<Relation> = Vec::new();
    let idx = [1usize, 2, 3];

    // commuting elementary pairs: e_{ij} e_{kl} = e_{kl} e_{ij}, j≠k, i≠l
    for &i in &idx {
        for &j in &idx {
            if i == j {
                continue;
            }
            for &k in &idx {
                for &l in &idx {
                    if k == l || (i, j) >= (k, l) {
                        continue;
                    }
                    if j != k && i != l {
                        let w = word(&[(E(i, j), 1), (E(k, l), 1), (E(i, j), -1), (E(k, l), -1)]);
                        rels.push(Relation {
                            name: format!("commute e{i}{j} e{k}{l}"),
                            word: w,
                        });
                    }
                }
            }
        }
    }
    // e_{ij} e_{jk} = e_{ik} e_{jk} e_{ij} for distinct i, j, k
    for &i in &idx {
        for &j in &idx {
            for &k in &idx {
                if i == j || j == k || i == k {
                    continue;
                }
                let w = word(&[
                    (E(i, j), 1),
                    (E(j, k), 1),
                    (E(i, j), -1),
                    (E(j, k), -1),
                    (E(i, k), -1),
                ]);
                rels.push(Relation {
                    name: format!("braid e{i}{j} e{j}{k}"),
                    word: w,
                });
            }
        }
    }
    // (e_{13} e_{31}^{-1} e_{13})^4 = 1
    let s = word(&[(E(1, 3), 1), (E(3, 1), -1), (E(1, 3), 1)]);
    rels.push(Relation {
        name: "(e13 e31^-1 e13)^4".into(),
        word: s.pow(4),
    });
    // t_i t_j = t_j t_i
    for i in 1..=3usize {
        for j in (i + 1)..=3 {
            rels.push(Relation {
                name: format!("commute t{i} t{j}"),
                word: word(&[(T(i), 1), (T(j), 1), (T(i), -1), (T(j), -1)]),
            });
        }
    }
    // e_{ij} t_k = t_k e_{ij} for k ≠ i; e_{ij} t_i = t_i t_j^{-1} e_{ij}
    for &i in &idx {
        for &j in &idx {
            if i == j {
                continue;
            }
            for &k in &idx {
                if k != i {
                    rels.push(Relation {
                        name: format!("commute e{i}{j} t{k}"),
                        word: word(&[(E(i, j), 1), (T(k), 1), (E(i, j), -1), (T(k), -1)]),
                    });
                }
            }
            rels.push(Relation {
                name: format!("mixed e{i}{j} t{i}"),
                word: word(&[
                    (E(i, j), 1),
                    (T(i), 1),
                    (E(i, j), -1),
                    (T(j), 1),
                    (T(i), -1),
                ]),
            });
        }
    }
    rels
}

/// Evaluates every defining relation as an exact matrix/vector identity.
/// Returns the failing relation names (must come back empty).
pub fn verify_presentation() -> Vec<String> {
    relation_list()
        .into_iter()
        .filter(|r| !r.word.elem().is_identity())
        .map(|r| r.name)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use Gen::{E, T};

    #[test]
    fn group_inverse_random() {
        let mut rng = SplitMix64::new(5);
        let gens: Vec<GroupElem> = vec![
            E(1, 2).elem(),
            E(2, 1).elem(),
            E(1, 3).elem(),
            E(3, 1).elem(),
            E(2, 3).elem(),
            E(3, 2).elem(),
            T(1).elem(),
            T(2).elem(),
            T(3).elem(),
        ];
        for _ in 0..50 {
            let mut g = GroupElem::identity();
            for _ in 0..8 {
                let pick = gens[(rng.next_u64() % 9) as usize];
                g = g.mul(&if rng.next_u64() % 2 == 0 {
                    pick
                } else {
                    pick.inv()
                });
            }
            assert!(g.mul(&g.inv()).is_identity());
            assert!(g.inv().mul(&g).is_identity());
        }
    }

    #[test]
    fn all_relations_hold() {
        let failures = verify_presentation();
        assert!(failures.is_empty(), "failing relations: {failures:?}");
    }

    #[test]
    fn translations_commute() {
        let a = T(1).elem().mul(&T(2).elem());
        let b = T(2).elem().mul(&T(1).elem());
        assert_eq!(a, b);
    }

    #[test]
    fn mixed_relation_example() {
        // e_{1,2} t_1 = t_1 t_2^{-1} e_{1,2}
        let lhs = E(1, 2).elem().mul(&T(1).elem());
        let rhs = T(1)
            .elem()
            .mul(&T(2).elem().inv())
            .mul(&E(1, 2).elem());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn non_steinberg_pair_does_not_commute() {
        // e_{1,2} and e_{3,1} share an index (i = 1 = l): matrix
        // arithmetic says they do not commute, so they are excluded from
        // the commutation family
        let a = E(1, 2).elem().mul(&E(3, 1).elem());
        let b = E(3, 1).elem().mul(&E(1, 2).elem());
        assert_ne!(a, b);
        // their braid relation holds instead: e31 e12 = e32 e12 e31
        let lhs = E(3, 1).elem().mul(&E(1, 2).elem());
        let rhs = E(3, 2)
            .elem()
            .mul(&E(1, 2).elem())
            .mul(&E(3, 1).elem());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn braid_example() {
        // e_{1,2} e_{2,3} = e_{1,3} e_{2,3} e_{1,2}
        let lhs = E(1, 2).elem().mul(&E(2, 3).elem());
        let rhs = E(1, 3)
            .elem()
            .mul(&E(2, 3).elem())
            .mul(&E(1, 2).elem());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_is_homomorphism() {
        // ρ(gh) f = ρ(g) ρ(h) f on f = z/x3
        let f = RatFunc::var(0).div(&RatFunc::var(3));
        let mut rng = SplitMix64::new(9);
        let gens = [E(1, 2).elem(), E(3, 2).elem(), T(2).elem(), T(3).elem()];
        for _ in 0..20 {
            let g = gens[(rng.next_u64() % 4) as usize];
            let h = gens[(rng.next_u64() % 4) as usize].mul(&g);
            let lhs = act(&g.mul(&h), &f);
            let rhs = act(&g, &act(&h, &f));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn t2_action_example() {
        // t_2 acting on z/x1 gives (z - x2)/x1
        let f = RatFunc::var(0).div(&RatFunc::var(1));
        let g = act(&T(2).elem(), &f);
        let expect = RatFunc::var(0).sub(&RatFunc::var(2)).div(&RatFunc::var(1));
        assert_eq!(g, expect);
    }

    #[test]
    fn word_reduction() {
        let mut w = Word::new();
        w.push(E(1, 2), 1);
        w.push(E(1, 2), -1);
        assert!(w.is_empty());
        let r = word(&[(E(1, 3), 1), (E(3, 1), -1), (E(1, 3), 1)]);
        assert_eq!(r.pow(4).elem(), GroupElem::identity());
        assert!(!r.pow(2).elem().is_identity());
    }
}
