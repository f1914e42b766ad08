#pragma once

#include "rational.hpp"
#include "free_group.hpp"
#include "groups.hpp"
#include "selfsim.hpp"
#include "steinberg.hpp"
#include "bundle.hpp"
#include "repnorm.hpp"
#include "text.hpp"
#include "random.hpp"
#include "serialize.hpp"
#include "pipeline.hpp"
