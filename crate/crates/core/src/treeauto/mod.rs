//! Automorphisms of the spherically homogeneous tree with alphabets
//! `X_1, X_2, ..`: rooted, directed and embedded elements, products and
//! inverses, with lazy sections, finite portraits and orders on truncations.

mod aut;
mod portrait;
mod shape;

pub use aut::{DirectedElem, SpineSide, Tree, TreeAut};
pub use portrait::{Portrait, PortraitChild, Truncated};
pub use shape::{SpinePair, TreeShape};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::altembed::{GWord, GroupChain};
    use crate::permcore::Permutation;

    fn tree(chain: GroupChain, horizon: usize) -> Arc<Tree> {
        let shape = Arc::new(TreeShape::new(chain, 1, horizon).unwrap());
        let spine = SpinePair::canonical(&shape).unwrap();
        Tree::new(shape, spine).unwrap()
    }

    fn q(text: &str) -> Permutation {
        Permutation::parse(text, 5).unwrap()
    }

    fn random_element(t: &Arc<Tree>, level: usize, rng: &mut ChaCha8Rng, len: usize) -> TreeAut {
        let data = t.level(level).unwrap();
        let mut acc = TreeAut::identity(t, level);
        for _ in 0..len {
            let piece = if rng.gen_bool(0.5) {
                let gens = data.a_generators();
                TreeAut::rooted(t, level, gens[rng.gen_range(0..gens.len())].clone()).unwrap()
            } else {
                let qs = ["(1 2 3)", "(1 2 3 4 5)", "(1 3)(2 4)"];
                let g = if rng.gen_bool(0.5) {
                    GWord::generator(0)
                } else {
                    GWord::identity()
                };
                TreeAut::directed_pair(t, level, q(qs[rng.gen_range(0..3)]), g).unwrap()
            };
            acc = if rng.gen_bool(0.3) {
                acc.compose(&piece.inverse())
            } else {
                acc.compose(&piece)
            };
        }
        acc
    }

    fn random_vertex(t: &Arc<Tree>, level: usize, len: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
        (0..len)
            .map(|i| rng.gen_range(0..t.level(level + i).unwrap().x_size() as u32))
            .collect()
    }

    #[test]
    fn directed_sections() {
        let t = tree(GroupChain::trivial(), 3);
        let (alpha, beta) = t.spine().at(1).unwrap();
        let d =
            TreeAut::directed(&t, 1, SpineSide::Alpha, DirectedElem::Q(q("(1 2 3 4 5)"))).unwrap();
        assert!(d.root().unwrap().is_none());
        let at_o = d.section(0).unwrap();
        assert_eq!(at_o.level(), 2);
        assert!(at_o.root().unwrap().is_none());
        assert_eq!(
            at_o.support().unwrap().as_slice(),
            &[0, t.spine().at(2).unwrap().0]
        );
        let at_alpha = d.section(alpha).unwrap();
        let data = t.level(2).unwrap();
        let expected = data
            .coset_action(&data.q_to_natural(&q("(1 2 3 4 5)")))
            .unwrap();
        assert_eq!(at_alpha.root().unwrap().as_deref(), Some(&expected));
        assert!(at_alpha.support().unwrap().is_empty());
        assert!(d.section(beta).unwrap().is_trivial());
        let other = (1..20).find(|&x| x != alpha && x != beta).unwrap();
        assert!(d.section(other).unwrap().is_trivial());
    }

    #[test]
    fn directed_alpha_and_beta_commute() {
        let t = tree(GroupChain::cyclic(2), 3);
        let a = TreeAut::directed(&t, 1, SpineSide::Alpha, DirectedElem::Q(q("(1 2 3)"))).unwrap();
        let b = TreeAut::directed(&t, 1, SpineSide::Beta, DirectedElem::G(GWord::generator(0)))
            .unwrap();
        assert!(a.compose(&b).equal_up_to_depth(&b.compose(&a), 3).unwrap());
    }

    #[test]
    fn section_laws() {
        let t = tree(GroupChain::trivial(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let g = random_element(&t, 1, &mut rng, 6);
            let h = random_element(&t, 1, &mut rng, 6);
            let x = rng.gen_range(0..20);
            let hx = h.apply_letter(x).unwrap();
            // (gh)|_x = g|_{h(x)} h|_x
            let lhs = g.compose(&h).section(x).unwrap();
            let rhs = g.section(hx).unwrap().compose(&h.section(x).unwrap());
            assert!(lhs.equal_up_to_depth(&rhs, 2).unwrap());
            // (h⁻¹gh)|_x = (h|_y)⁻¹ g|_{h(x)} h|_x with y = h⁻¹gh(x)
            let conj_elem = h.conjugate_by(&g);
            let y = conj_elem.apply_letter(x).unwrap();
            let conj = conj_elem.section(x).unwrap();
            let expected = h
                .section(y)
                .unwrap()
                .inverse()
                .compose(&g.section(hx).unwrap())
                .compose(&h.section(x).unwrap());
            assert!(conj.equal_up_to_depth(&expected, 2).unwrap());
            // g|_u|_v = g|_{uv}
            let u = random_vertex(&t, 1, 1, &mut rng);
            let v = random_vertex(&t, 2, 1, &mut rng);
            let uv: Vec<u32> = u.iter().chain(&v).copied().collect();
            let two_step = g.section_at(&u).unwrap().section_at(&v).unwrap();
            assert!(two_step
                .equal_up_to_depth(&g.section_at(&uv).unwrap(), 1)
                .unwrap());
            // g(uv) = g(u) g|_u(v)
            let image = g.apply(&uv).unwrap();
            assert_eq!(image[..1], g.apply(&u).unwrap()[..]);
            assert_eq!(image[1..], g.section_at(&u).unwrap().apply(&v).unwrap()[..]);
        }
    }

    #[test]
    fn inverse_undoes_action() {
        let t = tree(GroupChain::cyclic(2), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let g = random_element(&t, 1, &mut rng, 5);
            let v = random_vertex(&t, 1, 2, &mut rng);
            assert_eq!(g.inverse().apply(&g.apply(&v).unwrap()).unwrap(), v);
            assert!(g.compose(&g.inverse()).is_identity_to_depth(2).unwrap());
        }
    }

    #[test]
    fn memoisation_is_transparent() {
        let t = tree(GroupChain::trivial(), 3);
        let plain = t.uncached();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut rng2 = rng.clone();
        for _ in 0..5 {
            let g = random_element(&t, 1, &mut rng, 8);
            let h = random_element(&plain, 1, &mut rng2, 8);
            let v = random_vertex(&t, 1, 3, &mut rng);
            random_vertex(&plain, 1, 3, &mut rng2);
            assert_eq!(g.apply(&v).unwrap(), h.apply(&v).unwrap());
            assert_eq!(g.truncate(2).unwrap(), h.truncate(2).unwrap());
            assert_eq!(g.order_to_depth(3).unwrap(), h.order_to_depth(3).unwrap());
        }
    }

    #[test]
    fn order_to_depth_is_exact() {
        let t = tree(GroupChain::trivial(), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = random_element(&t, 1, &mut rng, 5);
            for depth in 1..=3 {
                let n = g.order_to_depth(depth).unwrap();
                assert!(g.pow(n as i64).is_identity_to_depth(depth).unwrap());
                for p in [2u128, 3, 5, 7] {
                    if n.is_multiple_of(p) {
                        assert!(!g.pow((n / p) as i64).is_identity_to_depth(depth).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn order_matches_explicit_vertex_permutation() {
        let t = tree(GroupChain::trivial(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let g = random_element(&t, 1, &mut rng, 7);
            let images: Vec<u32> = (0..400u32)
                .map(|v| {
                    let w = g.apply(&[v / 20, v % 20]).unwrap();
                    w[0] * 20 + w[1]
                })
                .collect();
            let explicit = Permutation::from_images(images).unwrap().order();
            assert_eq!(g.order_to_depth(2).unwrap(), explicit as u128);
        }
    }

    #[test]
    fn stabilized_section_fixes_the_vertex() {
        let t = tree(GroupChain::trivial(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = random_element(&t, 1, &mut rng, 6);
        for x in 0..20u32 {
            let l = g.orbit_length(&[x]).unwrap();
            assert_eq!(g.pow(l as i64).apply(&[x]).unwrap(), vec![x]);
            assert_eq!(g.stabilized_section(&[x]).unwrap().level(), 2);
        }
    }

    #[test]
    fn portrait_marks_truncation() {
        let t = tree(GroupChain::trivial(), 3);
        let d = TreeAut::directed(&t, 1, SpineSide::Alpha, DirectedElem::Q(q("(1 2 3)"))).unwrap();
        let p = d.truncate(1).unwrap();
        assert_eq!(p.children.len(), 2);
        assert!(p
            .children
            .values()
            .all(|c| matches!(c, PortraitChild::Trunc(_))));
        let p2 = d.truncate(2).unwrap();
        let json = serde_json::to_value(&p2).unwrap();
        assert_eq!(json["children"]["0"]["children"]["0"], "trunc");
        assert!(json["children"]["0"]["perm"].is_array());
        assert!(p2.render_text().starts_with("root ()"));
    }

    #[test]
    fn horizon_is_enforced() {
        let t = tree(GroupChain::trivial(), 2);
        let g = TreeAut::rooted(&t, 1, t.level(1).unwrap().a_generators()[0].clone()).unwrap();
        assert!(g.apply(&[0, 0, 0]).is_err());
        assert!(g.order_to_depth(3).is_err());
        assert!(g.apply(&[25]).is_err());
    }
}
