#include "rknq/tableau.hpp"

#include <cmath>
#include <string>

namespace rknq {

namespace {

constexpr double kSumGate = 1e-13;

// Classical 3-stage order-4 Nystrom method (Hairer/Norsett/Wanner).
NystromTableau make_rkn4() {
    NystromTableau t;
    t.name = "RKN4";
    t.order = 4;
    t.stages = 3;
    t.c = {0.0, 0.5, 1.0};
    t.a = Matrix(3, 3);
    t.a.at(1, 0) = 1.0 / 8.0;
    t.a.at(2, 1) = 1.0 / 2.0;
    t.b = {1.0 / 6.0, 1.0 / 3.0, 0.0};
    t.bhat = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
    return t;
}

// Classical 4-stage order-5 Nystrom method (Hairer/Norsett/Wanner).
NystromTableau make_rkn5() {
    NystromTableau t;
    t.name = "RKN5";
    t.order = 5;
    t.stages = 4;
    t.c = {0.0, 1.0 / 5.0, 2.0 / 3.0, 1.0};
    t.a = Matrix(4, 4);
    t.a.at(1, 0) = 1.0 / 50.0;
    t.a.at(2, 0) = -1.0 / 27.0;
    t.a.at(2, 1) = 7.0 / 27.0;
    t.a.at(3, 0) = 3.0 / 10.0;
    t.a.at(3, 1) = -2.0 / 35.0;
    t.a.at(3, 2) = 9.0 / 35.0;
    t.b = {14.0 / 336.0, 100.0 / 336.0, 54.0 / 336.0, 0.0};
    t.bhat = {14.0 / 336.0, 125.0 / 336.0, 162.0 / 336.0, 35.0 / 336.0};
    return t;
}

// Order-10 member of the Dormand et al. embedded 12(10) pair. The pair's
// 17th stage has zero weight in both order-10 formulas, so only stages
// 1..16 remain.
NystromTableau make_rkn10() {
    NystromTableau t;
    t.name = "RKN10";
    t.order = 10;
    t.stages = 16;
    t.c = {0.0,
           2.0e-2,
           4.0e-2,
           1.0e-1,
           1.33333333333333333333333333333e-1,
           1.6e-1,
           5.0e-2,
           2.0e-1,
           2.5e-1,
           3.33333333333333333333333333333e-1,
           5.0e-1,
           5.55555555555555555555555555556e-1,
           7.5e-1,
           8.57142857142857142857142857143e-1,
           9.45216222272014340129957427739e-1,
           1.0};
    t.a = Matrix(16, 16);
    auto A = [&t](int p, int q, double v) { t.a.at(p - 1, q - 1) = v; };
    A(2, 1, 2.0e-4);
    A(3, 1, 2.66666666666666666666666666667e-4);
    A(3, 2, 5.33333333333333333333333333333e-4);
    A(4, 1, 2.91666666666666666666666666667e-3);
    A(4, 2, -4.16666666666666666666666666667e-3);
    A(4, 3, 6.25e-3);
    A(5, 1, 1.64609053497942386831275720165e-3);
    A(5, 3, 5.48696844993141289437585733882e-3);
    A(5, 4, 1.75582990397805212620027434842e-3);
    A(6, 1, 1.9456e-3);
    A(6, 3, 7.15174603174603174603174603175e-3);
    A(6, 4, 2.91271111111111111111111111111e-3);
    A(6, 5, 7.89942857142857142857142857143e-4);
    A(7, 1, 5.6640625e-4);
    A(7, 3, 8.80973048941798941798941798942e-4);
    A(7, 4, -4.36921296296296296296296296296e-4);
    A(7, 5, 3.39006696428571428571428571429e-4);
    A(7, 6, -9.94646990740740740740740740741e-5);
    A(8, 1, 3.08333333333333333333333333333e-3);
    A(8, 4, 1.77777777777777777777777777778e-3);
    A(8, 5, 2.7e-3);
    A(8, 6, 1.57828282828282828282828282828e-3);
    A(8, 7, 1.08606060606060606060606060606e-2);
    A(9, 1, 3.65183937480112971375119150338e-3);
    A(9, 3, 3.96517171407234306617557289807e-3);
    A(9, 4, 3.19725826293062822350093426091e-3);
    A(9, 5, 8.22146730685543536968701883401e-3);
    A(9, 6, -1.31309269595723798362013884863e-3);
    A(9, 7, 9.77158696806486781562609494147e-3);
    A(9, 8, 3.75576906923283379487932641079e-3);
    A(10, 1, 3.70724106871850081019565530521e-3);
    A(10, 3, 5.08204585455528598076108163479e-3);
    A(10, 4, 1.17470800217541204473569104943e-3);
    A(10, 5, -2.11476299151269914996229766362e-2);
    A(10, 6, 6.01046369810788081222573525136e-2);
    A(10, 7, 2.01057347685061881846748708777e-2);
    A(10, 8, -2.83507501229335808430366774368e-2);
    A(10, 9, 1.48795689185819327555905582479e-2);
    A(11, 1, 3.51253765607334415311308293052e-2);
    A(11, 3, -8.61574919513847910340576078545e-3);
    A(11, 4, -5.79144805100791652167632252471e-3);
    A(11, 5, 1.94555482378261584239438810411e0);
    A(11, 6, -3.43512386745651359636787167574e0);
    A(11, 7, -1.09307011074752217583892572001e-1);
    A(11, 8, 2.3496383118995166394320161088e0);
    A(11, 9, -7.56009408687022978027190729778e-1);
    A(11, 10, 1.09528972221569264246502018618e-1);
    A(12, 1, 2.05277925374824966509720571672e-2);
    A(12, 3, -7.28644676448017991778247943149e-3);
    A(12, 4, -2.11535560796184024069259562549e-3);
    A(12, 5, 9.27580796872352224256768033235e-1);
    A(12, 6, -1.65228248442573667907302673325e0);
    A(12, 7, -2.10795630056865698191914366913e-2);
    A(12, 8, 1.20653643262078715447708832536e0);
    A(12, 9, -4.13714477001066141324662463645e-1);
    A(12, 10, 9.07987398280965375956795739516e-2);
    A(12, 11, 5.35555260053398504916870658215e-3);
    A(13, 1, -1.43240788755455150458921091632e-1);
    A(13, 3, 1.25287037730918172778464480231e-2);
    A(13, 4, 6.82601916396982712868112411737e-3);
    A(13, 5, -4.79955539557438726550216254291e0);
    A(13, 6, 5.69862504395194143379169794156e0);
    A(13, 7, 7.55343036952364522249444028716e-1);
    A(13, 8, -1.27554878582810837175400796542e-1);
    A(13, 9, -1.96059260511173843289133255423e0);
    A(13, 10, 9.18560905663526240976234285341e-1);
    A(13, 11, -2.38800855052844310534827013402e-1);
    A(13, 12, 1.59110813572342155138740170963e-1);
    A(14, 1, 8.04501920552048948697230778134e-1);
    A(14, 3, -1.66585270670112451778516268261e-2);
    A(14, 4, -2.1415834042629734811731437191e-2);
    A(14, 5, 1.68272359289624658702009353564e1);
    A(14, 6, -1.11728353571760979267882984241e1);
    A(14, 7, -3.37715929722632374148856475521e0);
    A(14, 8, -1.52433266553608456461817682939e1);
    A(14, 9, 1.71798357382154165620247684026e1);
    A(14, 10, -5.43771923982399464535413738556e0);
    A(14, 11, 1.38786716183646557551256778839e0);
    A(14, 12, -5.92582773265281165347677029181e-1);
    A(14, 13, 2.96038731712973527961592794552e-2);
    A(15, 1, -9.13296766697358082096250482648e-1);
    A(15, 3, 2.41127257578051783924489946102e-3);
    A(15, 4, 1.76581226938617419820698839226e-2);
    A(15, 5, -1.48516497797203838246128557088e1);
    A(15, 6, 2.15897086700457560030782161561e0);
    A(15, 7, 3.99791558311787990115282754337e0);
    A(15, 8, 2.84341518002322318984542514988e1);
    A(15, 9, -2.52593643549415984378843352235e1);
    A(15, 10, 7.7338785423622373655340014114e0);
    A(15, 11, -1.8913028948478674610382580129e0);
    A(15, 12, 1.00148450702247178036685959248e0);
    A(15, 13, 4.64119959910905190510518247052e-3);
    A(15, 14, 1.12187550221489570339750499063e-2);
    A(16, 1, -2.75196297205593938206065227039e-1);
    A(16, 3, 3.66118887791549201342293285553e-2);
    A(16, 4, 9.7895196882315626246509967162e-3);
    A(16, 5, -1.2293062345886210304214726509e1);
    A(16, 6, 1.42072264539379026942929665966e1);
    A(16, 7, 1.58664769067895368322481964272e0);
    A(16, 8, 2.45777353275959454390324346975e0);
    A(16, 9, -8.93519369440327190552259086374e0);
    A(16, 10, 4.37367273161340694839327077512e0);
    A(16, 11, -1.83471817654494916304344410264e0);
    A(16, 12, 1.15920852890614912078083198373e0);
    A(16, 13, -1.72902531653839221518003422953e-2);
    A(16, 14, 1.93259779044607666727649875324e-2);
    A(16, 15, 5.20444293755499311184926401526e-3);
    t.b = {1.70087019070069917527544646189e-2,
           0.0,
           0.0,
           0.0,
           0.0,
           0.0,
           7.22593359308314069488600038463e-2,
           3.72026177326753045388210502067e-1,
           -4.01821145009303521439340233863e-1,
           3.35455068301351666696584034896e-1,
           -1.31306501075331808430281840783e-1,
           1.89431906616048652722659836455e-1,
           2.68408020400290479053691655806e-2,
           1.63056656059179238935180933102e-2,
           3.79998835669659456166597387323e-3,
           0.0};
    t.bhat = {1.70087019070069917527544646189e-2,
              0.0,
              0.0,
              0.0,
              0.0,
              0.0,
              7.60624588745593757356421093119e-2,
              4.65032721658441306735263127583e-1,
              -5.35761526679071361919120311817e-1,
              5.03182602452027500044876052344e-1,
              -2.62613002150663616860563681567e-1,
              4.26221789886109468625984632024e-1,
              1.07363208160116191621476662322e-1,
              1.14139659241425467254626653171e-1,
              6.93633866500486770090602920091e-2,
              2.0e-2};
    return t;
}

}  // namespace

const NystromTableau& builtin_tableau(std::string_view name) {
    static const NystromTableau rkn4 = make_rkn4();
    static const NystromTableau rkn5 = make_rkn5();
    static const NystromTableau rkn10 = make_rkn10();
    if (name == "RKN4") return rkn4;
    if (name == "RKN5") return rkn5;
    if (name == "RKN10") return rkn10;
    throw UnknownNameError("unknown built-in method: " + std::string(name));
}

ValidationReport validate(const NystromTableau& t) {
    ValidationReport rep;
    const int m = t.stages;

    bool shape_ok = m > 0 && t.order > 0 && static_cast<int>(t.c.size()) == m &&
                    static_cast<int>(t.b.size()) == m && static_cast<int>(t.bhat.size()) == m &&
                    t.a.rows == m && t.a.cols == m;
    rep.checks.push_back({"shape", shape_ok, 0.0});
    if (!shape_ok) {
        rep.all_passed = false;
        return rep;
    }

    // a[p][q] = 0 for p <= q (1-based), i.e. on and above the diagonal
    double expl = 0.0;
    for (int p = 0; p < m; ++p)
        for (int q = p; q < m; ++q) expl = std::max(expl, std::abs(t.a.at(p, q)));
    rep.checks.push_back({"explicit", expl == 0.0, expl});

    double sb = 0.0, sbh = 0.0;
    for (int p = 0; p < m; ++p) {
        sb += t.b[p];
        sbh += t.bhat[p];
    }
    const double res_b = std::abs(sb - 0.5);
    const double res_bh = std::abs(sbh - 1.0);
    rep.checks.push_back({"position-weight-sum", res_b <= kSumGate, res_b});
    rep.checks.push_back({"velocity-weight-sum", res_bh <= kSumGate, res_bh});

    rep.all_passed = true;
    for (const auto& c : rep.checks) rep.all_passed = rep.all_passed && c.passed;

    double rel = 0.0;
    for (int p = 0; p < m; ++p) rel = std::max(rel, std::abs(t.b[p] - t.bhat[p] * (1.0 - t.c[p])));
    rep.weight_relation_residual = rel;
    rep.weight_relation_holds = rel <= kSumGate;
    return rep;
}

}  // namespace rknq
