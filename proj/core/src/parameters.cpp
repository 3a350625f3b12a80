#include "neolith/parameters.hpp"

#include "neolith/errors.hpp"

#include <cmath>
#include <string>

namespace neolith {

namespace {

void require_nonnegative(double value, const char* name)
{
    if (!std::isfinite(value) || value < 0.0) {
        throw InputError(std::string("parameter ") + name + " must be finite and >= 0");
    }
}

void require_positive(double value, const char* name)
{
    if (!std::isfinite(value) || value <= 0.0) {
        throw InputError(std::string("parameter ") + name + " must be finite and > 0");
    }
}

}  // namespace

void Parameters::validate() const
{
    require_nonnegative(growth_coefficient, "growth_coefficient");
    require_nonnegative(loss_coefficient, "loss_coefficient");
    require_nonnegative(impact_coefficient, "impact_coefficient");
    require_nonnegative(overhead_coefficient, "overhead_coefficient");
    require_positive(loss_mitigation_scale, "loss_mitigation_scale");
    require_nonnegative(flexibility.technology, "flexibility_technology");
    require_nonnegative(flexibility.agro_share, "flexibility_agro_share");
    require_nonnegative(flexibility.economies, "flexibility_economies");
    require_nonnegative(exchange_people, "exchange_people");
    require_nonnegative(exchange_info, "exchange_info");
    require_positive(npp_food_peak, "npp_food_peak");
    require_positive(npp_domestication_peak, "npp_domestication_peak");
    require_nonnegative(continental_economies_max, "continental_economies_max");
    require_positive(gdd_saturation, "gdd_saturation");
    require_positive(technology_floor, "technology_floor");
}

}  // namespace neolith
