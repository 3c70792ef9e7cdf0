use std::collections::BTreeMap;

use proptest::prelude::*;
use qvseg::blocks::{abs_subtractor, example_circuit, BlockKind};
use qvseg::encoding::{decode_color, decode_histogram, decode_segmentation, encode_video, layout_for};
use qvseg::qvm::bits::gather;
use qvseg::qvm::{run_basis, total_variation, DenseInit, DenseSimulator};
use qvseg::{
    measure, quantum_cost, run_sparse, segment_video, Circuit, CircuitBuilder, Control, Gate, Mode, SparseState,
    Video,
};

/// A gate on `width` wires with distinct wires; resets only when allowed.
fn gate(width: usize, resets: bool) -> impl Strategy<Value = Gate> {
    let wires = Just((0..width).collect::<Vec<usize>>()).prop_shuffle();
    let kinds = if resets { 0..5u8 } else { 0..4u8 };
    (wires, kinds, any::<[bool; 4]>(), 0..=3usize).prop_map(move |(w, kind, pol, k)| {
        let ctl = |i: usize| Control::when(w[i], pol[i % 4]);
        match kind {
            0 => Gate::x(w[0]),
            1 => {
                let k = k.min(width - 1);
                Gate::mcx((1..=k).map(ctl).collect(), w[0])
            }
            2 if width >= 2 => Gate::swap(w[0], w[1]),
            3 if width >= 3 => Gate::cswap(ctl(2), w[0], w[1]),
            4 => Gate::reset(w[0]),
            _ => Gate::x(w[0]),
        }
    })
}

fn circuit(width: usize, resets: bool) -> impl Strategy<Value = Circuit> {
    proptest::collection::vec(gate(width, resets), 0..24).prop_map(move |gates| {
        let mut b = CircuitBuilder::new(width).unwrap();
        for g in gates {
            b.append(g).unwrap();
        }
        b.build()
    })
}

fn state(width: usize) -> impl Strategy<Value = SparseState> {
    proptest::collection::btree_map(0..1u64 << width, 1u32..100, 1..12).prop_map(move |w| {
        let total: u32 = w.values().sum();
        SparseState::new(width, w.into_iter().map(|(b, x)| (b, x as f64 / total as f64))).unwrap()
    })
}

fn circuit_and_state(resets: bool) -> impl Strategy<Value = (Circuit, SparseState)> {
    (1usize..=8).prop_flat_map(move |w| (circuit(w, resets), state(w)))
}

fn video() -> impl Strategy<Value = Video> {
    (1u32..=2, 1u32..=2, 1u32..=3).prop_flat_map(|(m, n, q)| {
        let len = (1usize << m) << (2 * n);
        proptest::collection::vec(0u32..1 << q, len).prop_map(move |px| {
            let per = 1usize << (2 * n);
            let side = 1usize << n;
            Video::from_fn(m, n, q, |j, y, x| px[j * per + y * side + x])
        })
    })
}

proptest! {
    #[test]
    fn probability_is_conserved((c, s) in circuit_and_state(true)) {
        let out = run_sparse(&c, &s).unwrap();
        prop_assert!((out.total_probability() - 1.0).abs() <= 1e-12);
        prop_assert!(out.len() <= s.len());
    }

    #[test]
    fn reset_free_circuits_are_undone_by_their_mirror(
        c in (1usize..=10).prop_flat_map(|w| circuit(w, false))
    ) {
        let width = c.width();
        let round = c.concat(&c.inverse().unwrap()).unwrap();
        for basis in 0..1u64 << width {
            prop_assert_eq!(run_basis(&round, basis).unwrap(), basis);
        }
    }

    #[test]
    fn measurement_is_deterministic(s in state(6), seed in any::<u64>(), shots in 1u64..2000) {
        let qubits = [0, 2, 5];
        let a = measure(&s, &qubits, shots, seed).unwrap();
        prop_assert_eq!(&a, &measure(&s, &qubits, shots, seed).unwrap());
        prop_assert_eq!(a.shots(), shots);
    }

    #[test]
    fn cost_is_additive((c, _) in circuit_and_state(true), (d, _) in circuit_and_state(true)) {
        let w = c.width().max(d.width());
        let widen = |x: &Circuit| {
            let mut b = CircuitBuilder::new(w).unwrap();
            b.extend(x).unwrap();
            b.build()
        };
        let (c, d) = (widen(&c), widen(&d));
        let joined = c.concat(&d).unwrap();
        prop_assert_eq!(
            quantum_cost(&joined).total_cost,
            quantum_cost(&c).total_cost + quantum_cost(&d).total_cost
        );
    }

    #[test]
    fn encoding_round_trips(v in video()) {
        let l = layout_for(v.m_exp, v.n_exp, v.q).unwrap();
        let s = encode_video(&v, &l).unwrap();
        let cells = 1usize << (v.m_exp + 2 * v.n_exp);
        prop_assert_eq!(s.len(), cells);
        prop_assert!(s.iter().all(|(_, p)| p == 1.0 / cells as f64));
        prop_assert_eq!(decode_color(&s, &l).unwrap(), v);
    }

    #[test]
    fn histogram_decode_matches_state_decode(v in video(), t in 0u64..8, seed in any::<u64>()) {
        let t = t % (1 << v.q);
        let r = segment_video(&v, t, Mode::Sparse, Some(4096), seed).unwrap();
        let h = r.histogram.as_ref().unwrap();
        prop_assert_eq!(decode_histogram(h, &r.layout).unwrap(), r.result);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dense_trajectories_match_sparse((c, s) in circuit_and_state(true), seed in any::<u64>()) {
        let samples = DenseSimulator::default()
            .sample(&c, DenseInit::Superposition(&s), 4096, seed)
            .unwrap();
        let wires: Vec<usize> = (0..c.width()).collect();
        let h = qvseg::Histogram::from_samples(wires.clone(), &samples).unwrap();
        let exact = run_sparse(&c, &s).unwrap().marginal(&wires).unwrap();
        prop_assert!(total_variation(&h, &exact) < 0.05);
    }
}

/// A block applied to an ensemble equals the block applied to each
/// component on its own.
#[test]
fn blocks_act_componentwise() {
    for kind in [BlockKind::Comparator, BlockKind::AbsSubtractor, BlockKind::Binarization] {
        let c = example_circuit(kind, 3).unwrap();
        let comps: Vec<(u64, f64)> = (0..64u64).map(|ab| (ab, 1.0 / 64.0)).collect();
        let s = SparseState::new(c.width(), comps.clone()).unwrap();
        let out = run_sparse(&c, &s).unwrap();
        let mut expected: BTreeMap<u64, f64> = BTreeMap::new();
        for (b, p) in comps {
            *expected.entry(run_basis(&c, b).unwrap()).or_default() += p;
        }
        let got: BTreeMap<u64, f64> = out.iter().collect();
        assert_eq!(got, expected, "{kind}");
    }
}

#[test]
fn qas_difference_is_symmetric() {
    let q = 3;
    let (a, b): (Vec<usize>, Vec<usize>) = ((0..q).collect(), (q..2 * q).collect());
    let mut builder = CircuitBuilder::new(2 * q + 5).unwrap();
    abs_subtractor(&mut builder, &a, &b, &[6, 7, 8], &[9, 10]).unwrap();
    let c = builder.build();
    for x in 0..8u64 {
        for y in 0..8u64 {
            let fwd = run_basis(&c, x | y << q).unwrap();
            let rev = run_basis(&c, y | x << q).unwrap();
            assert_eq!(gather(fwd, &b), gather(rev, &b));
        }
    }
}

#[test]
fn segmentation_decode_is_exact_for_pipeline_states() {
    let v = Video::from_fn(2, 1, 2, |j, y, x| ((j * 3 + y + 2 * x) % 4) as u32);
    let (circuit, l, initial) = qvseg::pipeline::prepare(&v, 2).unwrap();
    let out = run_sparse(&circuit, &initial).unwrap();
    assert_eq!(out.len(), l.cells());
    let r = decode_segmentation(&out, &l).unwrap();
    assert_eq!(r, qvseg::classical_three_frame_diff(&v, 2, qvseg::BoundaryMode::Cyclic).unwrap());
}
