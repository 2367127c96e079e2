//! Reference values computed with mpmath; regenerate with scripts/gen_oracles.py.

#![allow(dead_code)]

pub const GAMMA: &[(f64, f64)] = &[
    (0.5, 1.772453850905516),
    (4.5, 11.631728396567448),
    (10.3, 716430.6890623764),
    (-2.5, -0.9453087204829419),
    (-0.3, -4.326851108825193),
    (30.7, 9.528117499079478e+31),
    (0.001, 999.4237724845955),
];

pub const GAMMA_P: &[(f64, f64, f64)] = &[
    (2.5, 3.0, 0.6937810815867216),
    (0.5, 0.01, 0.1124629160182849),
    (10.0, 8.0, 0.2833757412729891),
    (40.5, 60.0, 0.9968048573119753),
    (3.0, 25.0, 0.999999995298931),
    (100.5, 90.0, 0.1462387639571579),
];

pub const BESSEL_I: &[(f64, f64, f64)] = &[
    (0.5, 2.0, 2.046236863089055),
    (0.0, 0.3, 1.022626879351597),
    (2.3, 15.0, 283058.06440005836),
    (1.0, 40.0, 1.4707396163259352e+16),
    (7.5, 3.0, 0.0019359789576891397),
];

pub const BESSEL_K_SCALED: &[(f64, f64, f64)] = &[
    (1.0, 3.0, 0.8065634801287869),
    (0.0, 0.01, 4.768694028544462),
    (0.5, 40.0, 0.19816636488030054),
    (2.5, 1.0, 8.773198961208502),
    (0.25, 7.0, 0.4677990164531283),
    (1.5, 300.0, 0.07260132587401286),
];

pub const BESSEL_J: &[(f64, f64, f64)] = &[
    (2.0, 7.5, -0.23027341052579026),
    (0.0, 0.5, 0.9384698072408129),
    (0.25, 30.0, -0.12460443000880375),
    (1.5, 12.0, -0.20466344849652968),
    (0.5, 100.0, -0.04040213271625212),
];

pub const HYP0F1_REG: &[(f64, f64, f64, f64, f64)] = &[
    (1.5, -20.0, 0.0, 0.05831312255456072, 0.0),
    (1.5, 3.0, 4.0, 0.23899978275066996, 6.885282161556677),
    (2.0, -100.0, 30.0, 0.1227748085606518, -0.11379345715719788),
    (0.75, 50.0, -10.0, 48500.24553580147, -253682.86500822354),
    (1.0, -0.5, 0.0, 0.5591341444189799, 0.0),
];

pub const PFQ: &[(&[f64], &[f64], f64, f64, f64, f64)] = &[
    (&[1.0, 1.0], &[2.0], 0.3, 0.4, 1.0891035324499092, 0.27834900422186415),
    (&[-2.5], &[1.3], 10.0, 0.0, -11.61912936010044, 0.0),
    (&[0.5, 1.5], &[2.5, 0.7], 2.0, -1.0, 2.2220942355108373, -1.52244889698107),
    (&[], &[0.4], -6.0, 2.0, 0.7335565084027084, -1.1323708764068625),
    (&[2.5, 1.2], &[0.9], 0.2, 0.5, -0.2916469274875182, 1.3200830513767399),
    (&[-1.5], &[], 0.7, 0.0, 0.16431676725154987, 0.0),
];

pub const LAGUERRE: &[(usize, f64, f64, f64)] = &[
    (4, 0.5, 1.2, -0.9536625),
    (10, 0.0, 25.0, -45786.1997974537),
    (3, 1.5, -2.0, 32.645833333333336),
    (7, 0.25, 0.1, 0.9368502847078063),
];

pub const MITTAG_LEFFLER: &[(f64, f64, f64, f64)] = &[
    (0.5, 1.0, -2.0, 0.25539567631050575),
    (2.0, 1.0, -4.0, -0.4161468365471424),
    (1.5, 0.7, 3.0, 6.712309521802681),
    (1.0, 1.5, 2.0, 4.987119544129813),
    (0.8, 1.2, -1.0, 0.49122310471753183),
];

pub const MEIJER_G: &[(&[f64], &[f64], f64, f64)] = &[
    (&[], &[0.0, 0.5], 0.5, 0.43091319216749663),
    (&[], &[0.0, 0.5], 5.0, 0.02024654712984442),
    (&[], &[0.0, 0.5], 50.0, 1.2785669458139768e-06),
    (&[1.5], &[0.3, 1.0], 0.2, 0.5264657978952317),
    (&[1.5], &[0.3, 1.0], 2.0, 0.09639754121580547),
    (&[1.5], &[0.3, 1.0], 20.0, 1.100670993475329e-09),
    (&[2.5], &[0.5], 0.3, 0.38340579025361626),
    (&[2.5], &[0.5], 0.7, 0.2509980079602227),
    (&[2.5], &[0.5], 0.9, 0.09486832980505136),
    (&[2.5], &[0.5], 0.99, 0.009949874371066208),
    (&[], &[0.0, 1.0], 0.1, 0.7665668611535681),
    (&[], &[0.0, 1.0], 2.0, 0.13966747401529314),
    (&[], &[0.0, 1.0], 15.0, 0.001578947019580518),
    (&[], &[0.0, 0.0, 0.0], 0.05, 2.6199587829332573),
    (&[], &[0.0, 0.0, 0.0], 1.5, 0.09384358461643985),
    (&[], &[0.0, 0.0, 0.0], 10.0, 0.0025030566951819923),
    (&[3.0, 2.2], &[0.5, 1.0], 0.2, 0.1362935381053168),
    (&[3.0, 2.2], &[0.5, 1.0], 0.6, 0.02134768682845104),
    (&[3.0, 2.2], &[0.5, 1.0], 0.95, 7.41712917337362e-05),
    (&[], &[0.2, 0.7, 1.1], 0.5, 0.2942156980270673),
    (&[], &[0.2, 0.7, 1.1], 4.0, 0.051931664439916356),
    (&[], &[0.2, 0.7, 1.1], 40.0, 0.00044578073823606267),
];

pub const R_KERNEL: &[(f64, f64, f64, f64, f64, f64, f64, f64)] = &[
    (2.0, 0.5, 1.0, 0.5, 0.5, -1.0, 0.9287499322500953, -0.357321163253531),
    (1.0, 0.0, 2.0, 0.0, 1.0, 0.0, 2.3900103064094487, -0.0),
    (3.0, 1.5, -1.0, 0.5, 0.5, 0.25, 0.0243040362533043, 0.015322180080356174),
];

pub const KEY_INTEGRAL: &[(f64, f64, f64, f64, f64)] = &[
    (0.5, 1.0, 1.0, 1.0, 0.17831791741872946),
    (0.0, 2.0, 1.0, 0.5, 0.187119756405316),
    (2.0, 3.0, 2.5, 2.0, 0.021671366238880087),
];

pub const SIGNATURES: &[(&[f64], &[f64], u64, u64, &str)] = &[
    (&[-1.5], &[], u64::MAX, 1, "positive-pontryagin"),
    (&[-0.5], &[], 1, u64::MAX, "negative-pontryagin"),
    (&[-2.3], &[-0.7, 1.5], u64::MAX, 1, "positive-pontryagin"),
    (&[2.0], &[], u64::MAX, 0, "positive-pontryagin"),
    (&[-3.2, 1.1], &[-4.6], 5, u64::MAX, "negative-pontryagin"),
    (&[-4.7, -1.2], &[-2.9], u64::MAX, 2, "positive-pontryagin"),
    (&[0.3], &[-3.5, -0.25], 3, u64::MAX, "negative-pontryagin"),
    (&[-4.99, 2.2, -0.01], &[], u64::MAX, 2, "positive-pontryagin"),
];
