#pragma once

// Generated by tests/oracles/make_oracles.py; do not edit.

#include <array>

namespace oracle {

struct LogGamma { double re, im, lg_re, lg_im; };
inline constexpr std::array<LogGamma, 9> kLogGamma{{
    {1.0, 1.0, -0.6509231993018564, -0.3016403204675332},
    {0.5, 0.0, 0.5723649429247001, 0.0},
    {5.0, 0.0, 3.1780538303479458, 0.0},
    {-2.5, 0.0, -0.056243716497674054, -9.42477796076938},
    {-3.3, 0.7, -2.482358199542182, -11.009352077495585},
    {0.1, -4.0, -5.918386444788175, -0.9072420726485169},
    {-7.2, -2.5, -14.548548462915472, 19.043027851296802},
    {2.0, 30.0, -41.10259995100698, 74.35601706348764},
    {-20.5, 3.0, -51.225303676603396, -56.82945853180158},
}};

inline constexpr double kTwoK0At2 = 0.22778774549906688;

struct G { double x, value; };
// G^{2,0}_{1,2}(x | rho^2+1; 1, rho^2), rho = 0.8863
inline constexpr std::array<G, 4> kMeijerPdfBranch{{
    {0.01, 0.06793787012166318},
    {0.3, 0.32560924649177203},
    {1.0, 0.2421222719922474},
    {4.0, 0.015716536537410928},
}};
// G^{2,1}_{2,3}(x | 1, rho^2+1; 1, rho^2, 0), rho = 0.8863
inline constexpr std::array<G, 4> kMeijerCdfBranch{{
    {0.01, 0.09915377568993795},
    {0.3, 0.7444562849338311},
    {1.0, 1.112937000121288},
    {4.0, 1.2697208645167897},
}};

// H^{2,0}_{1,2}(x | (1.5, 0.7); (0.6, 1.2), (0.9, 0.5)), line Re s = -0.2
inline constexpr std::array<G, 3> kFoxH{{
    {0.2, 0.37855220499114467},
    {1.0, 0.30727390627833984},
    {3.0, 0.06436922453367684},
}};

struct Cdf { double a0, rho, gamma, value; };
// single-aperture SNR CDF at g0 = 1, integrated over the pointing gain
inline constexpr std::array<Cdf, 15> kSingleCdf{{
    {0.8532, 0.8863, 0.0001, 0.20397070083831834},
    {0.8532, 0.8863, 0.01, 0.5393501506138018},
    {0.8532, 0.8863, 0.3, 0.8603728124798353},
    {0.8532, 0.8863, 1.0, 0.9356553324497277},
    {0.8532, 0.8863, 5.0, 0.9861840863868336},
    {0.39, 0.5718, 0.0001, 0.5150510949185138},
    {0.39, 0.5718, 0.01, 0.8281996483626839},
    {0.39, 0.5718, 0.3, 0.9760936178247133},
    {0.39, 0.5718, 1.0, 0.9930730921922453},
    {0.39, 0.5718, 5.0, 0.9994647225820077},
    {1.0, 8.0, 0.0001, 0.07639458698414514},
    {1.0, 8.0, 0.01, 0.27174263315665115},
    {1.0, 8.0, 0.3, 0.6304240488981023},
    {1.0, 8.0, 1.0, 0.780002131728318},
    {1.0, 8.0, 5.0, 0.9269553279507368},
}};

struct Moment { double a0, rho, t, value; };
inline constexpr std::array<Moment, 9> kMoment{{
    {0.8532, 0.8863, -0.1, 2.080291849814506},
    {0.8532, 0.8863, 0.25, 0.38375120670938156},
    {0.8532, 0.8863, 1.0, 0.34491294374988324},
    {0.39, 0.5718, -0.1, 4.670303736508289},
    {0.39, 0.5718, 0.25, 0.1678737801630127},
    {0.39, 0.5718, 1.0, 0.035907342738941486},
    {1.0, 8.0, -0.1, 1.5068834794879429},
    {1.0, 8.0, 0.25, 0.6746282560528567},
    {1.0, 8.0, 1.0, 1.6292578380023395},
}};

// P(2 sqrt(gamma_1 gamma_2) <= x), i.i.d. significant pointing, g0 = 1
inline constexpr std::array<Cdf, 3> kGeoMean2{{
    {0.8532, 0.8863, 0.05, 0.7200606330700704},
    {0.8532, 0.8863, 0.5, 0.9374931592122706},
    {0.8532, 0.8863, 2.0, 0.9871503121483608},
}};

}  // namespace oracle
