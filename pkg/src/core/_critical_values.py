"""Nemenyi critical values q_alpha, generated by scripts/generate_critical_values.py.

Studentized-range quantiles at infinite degrees of freedom divided by
sqrt(2), for k = 2..20 methods. Do not edit by hand."""

Q_ALPHA = {
    0.05: {
        2: 1.959964,
        3: 2.343701,
        4: 2.569032,
        5: 2.727774,
        6: 2.849705,
        7: 2.948320,
        8: 3.030878,
        9: 3.101730,
        10: 3.163684,
        11: 3.218654,
        12: 3.268004,
        13: 3.312739,
        14: 3.353618,
        15: 3.391230,
        16: 3.426041,
        17: 3.458425,
        18: 3.488685,
        19: 3.517073,
        20: 3.543799,
    },
    0.1: {
        2: 1.644854,
        3: 2.052293,
        4: 2.291341,
        5: 2.459516,
        6: 2.588521,
        7: 2.692732,
        8: 2.779884,
        9: 2.854606,
        10: 2.919889,
        11: 2.977768,
        12: 3.029694,
        13: 3.076733,
        14: 3.119693,
        15: 3.159199,
        16: 3.195743,
        17: 3.229723,
        18: 3.261461,
        19: 3.291224,
        20: 3.319233,
    },
}
