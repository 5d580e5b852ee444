#include "dct2net/train_config.hpp"

#include <stdexcept>

namespace dct2net {

std::string to_string(LossKind kind) {
    switch (kind) {
    case LossKind::mse:
        return "mse";
    case LossKind::masked:
        return "masked";
    case LossKind::ortho_reg:
        return "ortho-reg";
    case LossKind::patch_target:
        return "patch-target";
    case LossKind::ortho_param:
        return "ortho-param";
    }
    return "unknown";
}

LossKind parse_loss_kind(const std::string& name) {
    for (auto kind : {LossKind::mse, LossKind::masked, LossKind::ortho_reg, LossKind::patch_target,
                      LossKind::ortho_param}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw std::invalid_argument("unknown loss '" + name + "'");
}

void TrainConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw std::invalid_argument(what);
        }
    };
    require(epochs >= 0, "epochs must be >= 0");
    require(batch >= 1, "batch must be >= 1");
    require(p >= 3 && p % 2 == 1, "p must be odd and >= 3");
    require(crop > p, "crop must exceed the patch side");
    require(lr_end > 0.0 && lr_start >= lr_end, "need lr_start >= lr_end > 0");
    require(m >= 1, "m must be >= 1");
    require(sigma_min > 0.0 && sigma_min <= sigma_max && sigma_max < 255.0,
            "sigma range must lie in (0, 255)");
    require(beta >= 0.0, "beta must be >= 0");
    require(threshold_scale > 0.0, "threshold scale must be positive");
    require(crops_per_image >= 1, "crops per image must be >= 1");
    require(!steps_per_epoch || *steps_per_epoch >= 1, "steps per epoch must be >= 1");
}

} // namespace dct2net
