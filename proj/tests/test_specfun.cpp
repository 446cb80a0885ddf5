#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scatlab/errors.hpp"
#include "scatlab/specfun.hpp"

using namespace scatlab::specfun;

namespace {

struct Reference {
    int n;
    double x;
    double j, y, dj, dy;
};

// 40-digit values from mpmath, rounded to 17 digits.
const Reference kTable[] = {
    {0, 0.1, 0.99750156206604003, -1.5342386513503668, -0.049937526036242, 6.4589510947020266},
    {0, 0.7, 0.8812008886074053, -0.19066492933739512, -0.32899574154005893, 1.1032498719076334},
    {0, 2.5, -0.048383776468197996, 0.49807035961523189, -0.49709410246427404, -0.1459181379667858},
    {0, 8.0, 0.17165080713755391, 0.22352148938756622, -0.23463634685391462, 0.15806046173124749},
    {0, 19.5, 0.17885382704017289, -0.025451742976154467, 0.020877070148097522, 0.17956456689631789},
    {0, 20.5, 0.11509696025367476, 0.13340956665759048, -0.13625468819339574, 0.11187909834450973},
    {0, 35.0, -0.12684568275631257, 0.045797987195155641, -0.04399094217962564, -0.12751273354559012},
    {0, 50.0, 0.055812327669251815, -0.098064995470077079, 0.097511828125175138, 0.056795668562014768},
    {0, 120.0, 0.071823415829156128, -0.012104365410016203, 0.011805211433001891, 0.071874473209149534},
    {1, 0.1, 0.049937526036242, -6.4589510947020266, 0.49812630170362006, 63.055272295669896},
    {1, 0.7, 0.32899574154005893, -1.1032498719076334, 0.41120697212160679, 1.3854063162449385},
    {1, 2.5, 0.49709410246427404, 0.1459181379667858, -0.24722141745390761, 0.43970310442851757},
    {1, 8.0, 0.23463634685391462, -0.15806046173124749, 0.14232126378081458, 0.24327904710397216},
    {1, 19.5, -0.020877070148097522, -0.17956456689631789, 0.17992444602212661, -0.016243303648138165},
    {1, 20.5, 0.13625468819339574, -0.11187909834450973, 0.10845039009789936, 0.13886708365000559},
    {1, 35.0, 0.04399094217962564, 0.12751273354559012, -0.12810256681858759, 0.042154766236710209},
    {1, 50.0, -0.097511828125175138, -0.056795668562014768, 0.057762564231755318, -0.096929082098836784},
    {1, 120.0, -0.011805211433001891, -0.071874473209149534, 0.07192179259109781, -0.011505411466606623},
    {2, 0.1, 0.001248958658799919, -127.64478324269016, 0.024958352860243622, 2546.436713759101},
    {2, 0.7, 0.058786944364191706, -2.961477561827272, 0.16103304335665405, 7.3581145904560015},
    {2, 2.5, 0.44605905843961723, -0.38133584924180325, 0.14024685571258026, 0.4509868173602284},
    {2, 8.0, -0.11299172042407525, -0.26303660482037809, 0.26288427695993344, -0.092301310526152971},
    {2, 19.5, -0.18099506500408033, 0.007034864320121863, -0.0023134737374226165, -0.18028609144197141},
    {2, 20.5, -0.10180381994212396, -0.1443246006424207, 0.14618676818774929, -0.097798649501346735},
    {2, 35.0, 0.12935945088086261, -0.038511545278264777, 0.036598973557862062, 0.12971339327577668},
    {2, 50.0, -0.059712800794258821, 0.095793168727596488, -0.095123316093404785, -0.060627395311118627},
    {2, 120.0, -0.072020169353039492, 0.010906457523197044, -0.0106048752771179, -0.072056247501202818},
    {5, 0.1, 2.6030817909644416e-9, -24461484.502303909, 1.3013239590861831e-7, 1222768392.8172618},
    {5, 0.7, 4.2882407058885479e-5, -1499.9983172514863, 0.00030379410039488317, 10581.639637476848},
    {5, 2.5, 0.01950162513450322, -3.8301760007407519, 0.034778629785248793, 6.2271546585144966},
    {5, 8.0, 0.18577477219056331, 0.25640106499011348, -0.22146666749449101, 0.122692558692351},
    {5, 19.5, 0.088453210779288901, -0.1610446265504994, 0.15331471680223632, 0.089953280740301041},
    {5, 20.5, 0.17801562809350652, -0.017834302652354321, 0.0126920526465069, 0.17317731855514626},
    {5, 35.0, -0.0015053072953907045, 0.1355478147477003, -0.13415132211342367, -0.0034662659152861055},
    {5, 50.0, -0.08140024769656964, -0.078548413913081653, 0.078981002051311916, -0.080203232689061625},
    {5, 120.0, -0.0045718460339604955, -0.072724325555491718, 0.072680889893849542, -0.0042643762020554174},
    {10, 0.1, 2.6905328954342171e-20, -1.1831335132045191e+18, 2.6904105961681134e-18, 1.1830677812824363e+20},
    {10, 0.7, 7.5175911502153906e-12, -4244719426.0703894, 1.0715474084443843e-10, 60473494571.06642},
    {10, 2.5, 2.2247284173983833e-6, -14782.847716021068, 8.6430439480824785e-6, 57031.278724809603},
    {10, 8.0, 0.060767026774251156, -0.90670100456922805, 0.050362111254565659, 0.55810028035757372},
    {10, 19.5, 0.15357193227904964, -0.11992559687912455, 0.097812551689669809, 0.13620287808882212},
    {10, 20.5, 0.18457542553175949, 0.038219865498612297, -0.03928718691351785, 0.16011379606751829},
    {10, 35.0, 0.06354639134396284, 0.12222473135000552, -0.11813820086206701, 0.059007701484162644},
    {10, 50.0, -0.11384784914946939, 0.0057238971820535135, -0.0044228912140786646, -0.11161457478315529},
    {10, 120.0, -0.070696213540718558, -0.018046575250825488, 0.018280590025667127, -0.070375236197573365},
    {25, 0.1, 1.9211561721613565e-58, -6.6275181869565485e+55, 4.8028534849608153e-56, 1.6568657393470471e+58},
    {25, 0.7, 2.5645375133858377e-37, -4.9667425174343094e+34, 9.1556096831418485e-36, 1.7731121359370859e+36},
    {25, 2.5, 1.606852782205488e-23, -7.9637941978842884e+20, 1.599110259505436e-22, 7.9221979942707079e+21},
    {25, 8.0, 3.8945499674890984e-11, -345113613.77729766, 1.1557016662244843e-10, 1019184091.3424144},
    {25, 19.5, 0.0065176014201692035, -3.1585080935426627, 0.0054517690772577123, 2.3670841563486561},
    {25, 20.5, 0.014326997189378098, -1.5866394216590117, 0.010593018118325063, 0.9944388704146018},
    {25, 35.0, -0.062173790388936437, -0.14852368896274311, 0.10599871283817335, -0.039338384905140124},
    {25, 50.0, -0.098426751299835828, -0.070787090207867385, 0.062629077877476025, -0.084317171423466685},
    {25, 120.0, 0.047160474648603604, 0.056568625058593709, -0.055533445250405833, 0.045879820830254551},
    {40, 0.1, 1.1146246002516423e-100, -7.1394189904180965e+97, 4.4584848080039047e-98, 2.8557584430505282e+100},
    {40, 0.7, 7.0758574089809889e-67, -1.1248059800376453e+64, 4.0427430112621395e-65, 6.426453218354982e+65},
    {40, 2.5, 8.8755868405815496e-45, -8.983456891531374e+41, 1.417385463202257e-43, 1.4344707472332425e+43},
    {40, 8.0, 1.0010983703741214e-24, -8.1130465587630297e+21, 4.906899384727404e-24, 3.9723936783182456e+22},
    {40, 19.5, 4.08853634784292e-10, -22295866.050597483, 7.354106295981779e-10, 39746622.119647412},
    {40, 20.5, 2.3304637787838045e-9, -3977480.7376321643, 3.9241067314085079e-9, 6628107.3520018674},
    {40, 35.0, 0.014965632617051044, -1.1266667907584511, 0.0088545278173255616, 0.54879296611720583},
    {40, 50.0, -0.13817628120116143, -0.045308011195609008, 0.031054826328472303, -0.081963148305429397},
    {40, 120.0, 0.072088646997365717, 0.020738937536620077, -0.019891104271821805, 0.067869832553257986},
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Ascending series in long double; accurate for small x.
long double series_j(int n, long double x) {
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i) term *= x / (2.0L * i);
    long double sum = term;
    const long double q = -x * x / 4.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * (k + n));
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum)) break;
    }
    return sum;
}

}  // namespace

TEST_SUITE("specfun") {

TEST_CASE("values and derivatives agree with high-precision references") {
    for (const auto& r : kTable) {
        CAPTURE(r.n);
        CAPTURE(r.x);
        const auto c = cylinder(r.n, r.x);
        CHECK(rel(c.j, r.j) < 1e-11);
        CHECK(rel(c.y, r.y) < 1e-11);
        CHECK(rel(c.dj, r.dj) < 1e-10);
        CHECK(rel(c.dy, r.dy) < 1e-10);
        CHECK(rel(bessel_j(r.n, r.x), r.j) < 1e-11);
        CHECK(rel(bessel_y(r.n, r.x), r.y) < 1e-11);
    }
}

TEST_CASE("small-argument J matches the long double series") {
    for (int n : {0, 1, 3, 7, 15}) {
        for (double x : {0.01, 0.3, 1.0, 1.9, 2.1, 4.0}) {
            CHECK(rel(bessel_j(n, x), static_cast<double>(series_j(n, x))) < 1e-13);
        }
    }
}

TEST_CASE("Wronskian J_{n+1} Y_n - J_n Y_{n+1} = 2 / (pi x)") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> order(0, 40);
    std::uniform_real_distribution<double> arg(0.1, 50.0);
    for (int i = 0; i < 200; ++i) {
        const int n = order(rng);
        const double x = arg(rng);
        const double w = bessel_j(n + 1, x) * bessel_y(n, x) - bessel_j(n, x) * bessel_y(n + 1, x);
        const double want = 2.0 / (std::numbers::pi * x);
        CAPTURE(n);
        CAPTURE(x);
        CHECK(rel(w, want) < 1e-11);
    }
}

TEST_CASE("three-term recurrence C_{n-1} + C_{n+1} = (2n / x) C_n") {
    for (double x : {0.5, 3.0, 17.0, 21.0, 44.0}) {
        const auto js = bessel_j_sequence(30, x);
        const auto ys = bessel_y_sequence(30, x);
        for (int n = 1; n < 30; ++n) {
            const double lhs = js[n - 1] + js[n + 1];
            const double rhs = 2.0 * n / x * js[n];
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(js[n - 1]) + std::abs(js[n + 1]) + std::abs(rhs)));
            const double ly = ys[n - 1] + ys[n + 1];
            const double ry = 2.0 * n / x * ys[n];
            CHECK(std::abs(ly - ry) <= 1e-12 * (std::abs(ys[n - 1]) + std::abs(ys[n + 1]) + std::abs(ry)));
        }
    }
}

TEST_CASE("sequences agree with single evaluations") {
    for (double x : {0.2, 5.0, 25.0}) {
        const auto js = bessel_j_sequence(20, x);
        const auto ys = bessel_y_sequence(20, x);
        for (int n = 0; n <= 20; ++n) {
            CHECK(rel(js[n], bessel_j(n, x)) < 1e-13);
            CHECK(rel(ys[n], bessel_y(n, x)) < 1e-13);
        }
    }
}

TEST_CASE("negative orders follow the reflection rule") {
    for (int n : {1, 2, 5, 12}) {
        const double s = (n % 2 == 0) ? 1.0 : -1.0;
        CHECK(bessel_j(-n, 3.3) == doctest::Approx(s * bessel_j(n, 3.3)).epsilon(1e-15));
        CHECK(bessel_y(-n, 3.3) == doctest::Approx(s * bessel_y(n, 3.3)).epsilon(1e-15));
    }
}

TEST_CASE("hankel01 and hankel1 are consistent") {
    for (double x : {0.05, 1.0, 9.9, 20.0, 20.1, 300.0}) {
        const auto h = hankel01(x);
        CHECK(std::abs(h.h0 - hankel1(0, x)) <= 1e-13 * std::abs(h.h0));
        CHECK(std::abs(h.h1 - hankel1(1, x)) <= 1e-13 * std::abs(h.h1));
        CHECK(std::abs(hankel1_prime(0, x) + h.h1) <= 1e-13 * std::abs(h.h1));
    }
}

TEST_CASE("zeros match references and a bisection on the series") {
    long double lo = 2.0L, hi = 3.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if ((series_j(0, lo) > 0) == (series_j(0, mid) > 0)) lo = mid; else hi = mid;
    }
    CHECK(std::abs(bessel_j_zero(0, 1) - static_cast<double>(lo)) < 1e-12);
    CHECK(bessel_j_zero(0, 2) == doctest::Approx(5.5200781102863106).epsilon(1e-13));
    CHECK(bessel_j_zero(2, 3) == doctest::Approx(11.619841172149059).epsilon(1e-13));
    CHECK(bessel_j_zero(5, 1) == doctest::Approx(8.7714838159599540).epsilon(1e-13));
    CHECK(bessel_dj_zero(0, 1) == doctest::Approx(3.8317059702075123).epsilon(1e-13));
    CHECK(bessel_dj_zero(1, 1) == doctest::Approx(1.8411837813406593).epsilon(1e-13));
    CHECK(bessel_dj_zero(5, 1) == doctest::Approx(6.4156163757002403).epsilon(1e-13));
    for (int m = 1; m < 6; ++m) CHECK(std::abs(bessel_j(3, bessel_j_zero(3, m))) < 1e-13);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(bessel_j(kMaxOrder + 1, 1.0), scatlab::DomainError);
    CHECK_THROWS_AS(bessel_y(0, 0.0), scatlab::DomainError);
    CHECK_THROWS_AS(bessel_j(0, kMaxArgument * 2), scatlab::DomainError);
    CHECK_THROWS_AS(bessel_j_zero(0, 0), scatlab::DomainError);
}

}  // TEST_SUITE
