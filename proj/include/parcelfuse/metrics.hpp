#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "parcelfuse/assign.hpp"
#include "parcelfuse/taxonomy.hpp"

namespace parcelfuse {

// Exact decimal rendering. Values are rounded half-up to two decimals
// using integer arithmetic only, so results are platform-independent.

// Half-up hundredths of num/den; den must be > 0.
long long ratio_hundredths(unsigned long long num, unsigned long long den);

// 56 -> "0.56", 1766 -> "17.66".
std::string format_hundredths(long long hundredths);

// "0.81" style ratio; empty string when den == 0.
std::string format_ratio(std::size_t num, std::size_t den);

// "17.66%" style percentage; empty string when den == 0.
std::string format_percent(std::size_t num, std::size_t den);

// Parcels labeled with the code or any of its descendants. A level-1 query
// therefore includes parcels labeled only with finer codes beneath it.
std::set<std::string> parcels_with_class(const LabelTable& table, LbcsCode code,
                                         const LbcsTaxonomy& taxonomy);

// One inter-source comparison cell for one class.
struct AgreementCell {
    LbcsCode code;
    std::string source_a;
    std::string source_b;
    std::size_t count_a = 0;
    std::size_t count_b = 0;
    std::size_t intersection = 0;
    std::size_t unions = 0;

    // Defined only when unions > 0; rendered blank otherwise.
    double percent() const {
        return unions ? static_cast<double>(intersection) / static_cast<double>(unions) : 0.0;
    }
    std::string rendered_percent() const { return format_percent(intersection, unions); }
};

// Intersection-over-union of the rolled-up parcel sets of two sources.
AgreementCell pairwise_agreement(const LabelTable& a, const LabelTable& b, LbcsCode code,
                                 const LbcsTaxonomy& taxonomy);

// Size of the intersection across all tables (at least two required).
std::size_t kway_intersection(const std::vector<const LabelTable*>& tables, LbcsCode code,
                              const LbcsTaxonomy& taxonomy);

// One evaluation row against the authoritative classes.
struct EvaluationRow {
    std::string class_name;
    std::size_t truth_count = 0;  // parcels carrying this class in the footprints
    std::size_t labeled = 0;      // labeled parcels mapping to this class
    std::size_t correct = 0;      // labeled parcels whose truth class matches

    std::string rendered_precision() const { return format_ratio(correct, labeled); }
    std::string rendered_recall() const { return format_ratio(correct, truth_count); }
};

// Compares a label table against the footprints' authoritative classes.
// Each held LBCS code maps through the crosswalk; level-3 codes roll up to
// their level-2 parent first. Codes outside the crosswalk contribute
// nothing. One row per crosswalk target class, sorted by name.
std::vector<EvaluationRow> evaluate(const LabelTable& table,
                                    const std::vector<ParcelFootprint>& footprints,
                                    const AuthoritativeCrosswalk& crosswalk,
                                    const LbcsTaxonomy& taxonomy);

}  // namespace parcelfuse
