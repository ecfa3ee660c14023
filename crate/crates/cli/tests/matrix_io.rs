use opconvex::HermitianMatrix;
use opconvex_cli::{parse_matrix, serialize_matrix, MatrixFile};
use proptest::prelude::*;

fn hermitian(n: usize) -> impl Strategy<Value = HermitianMatrix> {
    let entry = prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -1e3f64..1e3];
    proptest::collection::vec(entry, 2 * n * n).prop_map(move |v| {
        let mut re = vec![vec![0.0; n]; n];
        let mut im = vec![vec![0.0; n]; n];
        for i in 0..n {
            re[i][i] = v[i * n + i];
            for j in (i + 1)..n {
                re[i][j] = v[i * n + j];
                re[j][i] = v[i * n + j];
                im[i][j] = v[n * n + i * n + j];
                im[j][i] = -v[n * n + i * n + j];
            }
        }
        HermitianMatrix::from_parts(&re, &im).unwrap()
    })
}

fn bits(h: &HermitianMatrix) -> Vec<(u64, u64)> {
    h.as_matrix().iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect()
}

proptest! {
    #[test]
    fn round_trip_is_bit_exact(h in (1usize..=6).prop_flat_map(hermitian)) {
        let text = serialize_matrix(&h);
        let back = parse_matrix(text.as_bytes()).unwrap();
        prop_assert_eq!(bits(&back), bits(&h));
        prop_assert_eq!(serialize_matrix(&back), text);
    }

    #[test]
    fn documents_round_trip_through_the_file_type(h in (1usize..=4).prop_flat_map(hermitian)) {
        let doc = MatrixFile::from(&h);
        let parsed: MatrixFile = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(parsed, doc);
    }
}
