// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "clcp/ndnn/attention.hpp"
#include "clcp/ndnn/checkpoint.hpp"
#include "clcp/ndnn/init.hpp"
#include "clcp/ndnn/layers.hpp"
#include "clcp/ndnn/loss.hpp"
#include "clcp/ndnn/optim.hpp"
#include "clcp/ndnn/tensor.hpp"
#include "clcp/ndnn/gradcheck.hpp"
