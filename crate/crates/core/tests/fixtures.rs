use cnot_forge::fixtures::{self, *};
use cnot_forge::gf2::{cost_eq1, random_invertible};
use cnot_forge::BitMatrix;
use sha2::{Digest, Sha256};

fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[test]
fn checksums_are_unchanged() {
    let expected = [
        (
            NONCONVERGENT_5,
            "43730f596109489e1a10a8d1f2626795739f209d969b6168c7201b30e9034c23",
        ),
        (
            NONCONVERGENT_5_INVERSE,
            "0649abdcd60f0222ed993954bd51391706ca306d91043385de0540a1a48a6132",
        ),
        (
            NONCONVERGENT_5_STEPS[0].0,
            "778bed5960cdbb4aa85201563a85b4b8f28afc930dbdf9da843a456a152449fa",
        ),
        (
            NONCONVERGENT_5_STEPS[0].1,
            "894aef929f74e32c56b27bd1440121943df1e2bf08f0e97fed83618b6e43e8b9",
        ),
        (
            NONCONVERGENT_5_STEPS[1].0,
            "44304cc6cbb2575a100a0075a9407351f031676f174229961e46b5a45e3e64af",
        ),
        (
            NONCONVERGENT_5_STEPS[1].1,
            "f2f7438004a8d64053ac4e5a435e939b402f5450bbb35a893947f2f3ed95be73",
        ),
        (
            NONCONVERGENT_5_STEPS[2].0,
            "2f2c1c5c0894641b365d4c8913486db08146b42b768a65473b718a60a06940d9",
        ),
        (
            NONCONVERGENT_5_STEPS[2].1,
            "874ca0d3111605e27d1c57990fbfe6dce038f216345b35080e51800b0770276d",
        ),
        (
            PREFIX_XOR_4,
            "eeee0c09efc401ea5c8012d29ca02ac6e8f900b173527f9bfe91fc9a46687066",
        ),
        (
            REFERENCE_6,
            "e3ce25baed3040aad722836ac1a4b411b14f7a9999f9fa7b90d3e24c70f33a24",
        ),
        (
            REFERENCE_6_REORDERED,
            "a444de0c8014d41618e6b02064572656d9ce63774aa8301cad71523cf961d1ee",
        ),
        (
            TEST_16,
            "6f6b998ccefbdcfa9069305ba74cf99ddde4e9efa58130f5ce787f9da2eace6a",
        ),
    ];
    for (i, (text, sum)) in expected.iter().enumerate() {
        assert_eq!(sha256_hex(text), *sum, "fixture {i}");
    }
}

#[test]
fn every_fixture_is_invertible() {
    let mut all = vec![
        NONCONVERGENT_5,
        NONCONVERGENT_5_INVERSE,
        REFERENCE_6,
        REFERENCE_6_REORDERED,
        TEST_16,
        PREFIX_XOR_4,
    ];
    for (m, mi) in NONCONVERGENT_5_STEPS {
        all.push(m);
        all.push(mi);
    }
    for text in all {
        assert!(fixtures::load(text).is_invertible());
    }
}

#[test]
fn bundled_inverses_match() {
    assert_eq!(
        nonconvergent_5().inverse().unwrap(),
        fixtures::load(NONCONVERGENT_5_INVERSE)
    );
    for (m, mi) in NONCONVERGENT_5_STEPS {
        assert_eq!(fixtures::load(m).inverse().unwrap(), fixtures::load(mi));
    }
}

#[test]
fn step_costs_descend() {
    let m = nonconvergent_5();
    assert_eq!(cost_eq1(&m, &m.inverse().unwrap()), 20);
    let costs: Vec<u32> = NONCONVERGENT_5_STEPS
        .iter()
        .map(|(m, mi)| cost_eq1(&fixtures::load(m), &fixtures::load(mi)))
        .collect();
    assert_eq!(costs, [16, 11, 5]);
}

#[test]
fn reordered_rows_follow_the_permutation() {
    let m = reference_6();
    let r = reference_6_reordered();
    for (i, &p) in REFERENCE_6_PERMUTATION.iter().enumerate() {
        assert_eq!(r.row(i), m.row(p));
    }
    let p = BitMatrix::permutation(&REFERENCE_6_PERMUTATION).unwrap();
    assert_eq!(p.mul(&m).unwrap(), r);
}

#[test]
fn prefix_xor_is_lower_triangular_ones() {
    let m = prefix_xor_4();
    assert_eq!(m, BitMatrix::from_fn(4, |i, j| j <= i));
}

#[test]
fn generator_yields_invertible_matrices() {
    for seed in 0..1000 {
        let m = random_invertible(8, seed);
        assert!(m.is_invertible(), "seed {seed}");
    }
}
