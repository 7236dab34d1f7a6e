//! Published characteristic polynomials and chamber counts, stored in factored form.
//!
//! These cover sizes whose point counts are far beyond desk scale; they are
//! checked only arithmetically (Zaslavsky count, divisibility by `|W|`).

use num_bigint::BigInt;

use crate::arrangement::Family;
use crate::exactmath::IntegerPolynomial;

/// One published row: `chi` as a product of factors, the chamber count and the fiber size.
#[derive(Clone, Debug)]
pub struct ReferenceEntry {
    pub family: Family,
    pub m: usize,
    /// Factors with coefficients lowest degree first; repeated factors are listed repeatedly.
    pub factors: &'static [&'static [i64]],
    pub chambers: &'static str,
    /// Fiber size as printed.
    pub fiber: &'static str,
    /// Set when the printed fiber size disagrees with `chambers / |W|`: the value that division gives.
    pub erratum: Option<&'static str>,
}

impl ReferenceEntry {
    pub fn chi(&self) -> IntegerPolynomial {
        let polys: Vec<IntegerPolynomial> = self.factors.iter().map(|f| IntegerPolynomial::from_i64(f)).collect();
        IntegerPolynomial::product(&polys)
    }

    pub fn chambers(&self) -> BigInt {
        self.chambers.parse().expect("stored literal")
    }

    pub fn fiber(&self) -> BigInt {
        self.fiber.parse().expect("stored literal")
    }

    /// The fiber size consistent with the stored chamber count.
    pub fn consistent_fiber(&self) -> BigInt {
        self.erratum.unwrap_or(self.fiber).parse().expect("stored literal")
    }
}

const fn lin(root: i64) -> &'static [i64] {
    // t - root
    match root {
        1 => &[-1, 1],
        3 => &[-3, 1],
        4 => &[-4, 1],
        5 => &[-5, 1],
        7 => &[-7, 1],
        8 => &[-8, 1],
        9 => &[-9, 1],
        11 => &[-11, 1],
        13 => &[-13, 1],
        14 => &[-14, 1],
        15 => &[-15, 1],
        17 => &[-17, 1],
        19 => &[-19, 1],
        23 => &[-23, 1],
        24 => &[-24, 1],
        25 => &[-25, 1],
        26 => &[-26, 1],
        27 => &[-27, 1],
        29 => &[-29, 1],
        31 => &[-31, 1],
        35 => &[-35, 1],
        37 => &[-37, 1],
        39 => &[-39, 1],
        41 => &[-41, 1],
        _ => panic!("no stored linear factor"),
    }
}

pub const REFERENCE: &[ReferenceEntry] = &[
    ReferenceEntry {
        family: Family::RestrictedAllSubset,
        m: 3,
        factors: &[lin(1), lin(5)],
        chambers: "12",
        fiber: "2",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::RestrictedAllSubset,
        m: 4,
        factors: &[lin(1), lin(5), lin(7)],
        chambers: "96",
        fiber: "4",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::RestrictedAllSubset,
        m: 5,
        factors: &[lin(1), lin(7), lin(8), lin(9)],
        chambers: "1440",
        fiber: "12",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::RestrictedAllSubset,
        m: 6,
        factors: &[lin(1), lin(7), lin(11), lin(13), lin(14)],
        chambers: "40320",
        fiber: "56",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::RestrictedAllSubset,
        m: 7,
        factors: &[lin(1), lin(11), lin(13), lin(17), lin(19), lin(23)],
        chambers: "2903040",
        fiber: "576",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::RestrictedAllSubset,
        m: 8,
        factors: &[lin(1), lin(19), lin(23), lin(25), lin(27), lin(29), lin(31)],
        chambers: "670924800",
        fiber: "16640",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::RestrictedAllSubset,
        m: 9,
        factors: &[
            lin(1),
            &[
                -260558129500,
                41492561354,
                -2855339970,
                110142669,
                -2573760,
                36456,
                -290,
                1,
            ],
        ],
        chambers: "610037568000",
        fiber: "1681100",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::UnrestrictedAllSubset,
        m: 3,
        factors: &[lin(1), lin(4), lin(5)],
        chambers: "60",
        fiber: "10",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::UnrestrictedAllSubset,
        m: 4,
        factors: &[lin(1), lin(5), lin(7), lin(8)],
        chambers: "864",
        fiber: "36",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::UnrestrictedAllSubset,
        m: 5,
        factors: &[lin(1), lin(7), lin(9), lin(11), lin(13)],
        chambers: "26880",
        fiber: "224",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::UnrestrictedAllSubset,
        m: 6,
        factors: &[lin(1), lin(11), lin(13), lin(17), lin(17), lin(19)],
        chambers: "2177280",
        fiber: "3024",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::UnrestrictedAllSubset,
        m: 7,
        factors: &[lin(1), lin(19), lin(23), &[510834, -75180, 4190, -105, 1]],
        chambers: "566697600",
        fiber: "112440",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::MidHyperplane,
        m: 4,
        factors: &[lin(1), lin(3), lin(5)],
        chambers: "48",
        fiber: "2",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::MidHyperplane,
        m: 5,
        factors: &[lin(1), lin(7), lin(8), lin(9)],
        chambers: "1440",
        fiber: "12",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::MidHyperplane,
        m: 6,
        factors: &[lin(1), lin(13), lin(14), lin(15), lin(17)],
        chambers: "120960",
        fiber: "168",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::MidHyperplane,
        m: 7,
        factors: &[lin(1), lin(23), lin(24), lin(25), lin(26), lin(27)],
        chambers: "23587200",
        fiber: "4680",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::MidHyperplane,
        m: 8,
        factors: &[lin(1), lin(35), lin(37), lin(39), lin(41), &[1926, -85, 1]],
        chambers: "9248117760",
        fiber: "229386",
        erratum: Some("229368"),
    },
    ReferenceEntry {
        family: Family::MidHyperplane,
        m: 9,
        factors: &[
            lin(1),
            &[
                -2972902161600,
                336081719070,
                -16393719797,
                447514669,
                -7387310,
                73780,
                -413,
                1,
            ],
        ],
        chambers: "6651665153280",
        fiber: "18330206",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::MidHyperplane,
        m: 10,
        factors: &[
            lin(1),
            &[
                3732690616086600,
                -321989533359786,
                12315189583899,
                -272839984046,
                3830348179,
                -34896134,
                201481,
                -674,
                1,
            ],
        ],
        chambers: "8134544088921600",
        fiber: "2241662282",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::SignedAllSubset,
        m: 3,
        factors: &[lin(1), lin(5), lin(7)],
        chambers: "96",
        fiber: "2",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::SignedAllSubset,
        m: 4,
        factors: &[lin(1), lin(11), lin(13), lin(15)],
        chambers: "5376",
        fiber: "14",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::SignedAllSubset,
        m: 5,
        factors: &[lin(1), lin(29), lin(31), &[971, -60, 1]],
        chambers: "1981440",
        fiber: "516",
        erratum: None,
    },
    ReferenceEntry {
        family: Family::SignedAllSubset,
        m: 6,
        factors: &[lin(1), &[-2691439347, 165591769, -4182690, 54310, -363, 1]],
        chambers: "5722536960",
        fiber: "124187",
        erratum: None,
    },
];

pub fn lookup(family: Family, m: usize) -> Option<&'static ReferenceEntry> {
    REFERENCE.iter().find(|e| e.family == family && e.m == m)
}

/// The Catalan arrangement's `chi`: `(t - m - 1)(t - m - 2)...(t - 2m + 1)`.
pub fn catalan_chi(m: usize) -> IntegerPolynomial {
    let roots: Vec<i64> = (m as i64 + 1..=2 * m as i64 - 1).collect();
    IntegerPolynomial::from_roots(&roots)
}
