#pragma once

#include "evguard/detector/checkpoint.hpp"
#include "evguard/detector/common.hpp"
#include "evguard/detector/gru.hpp"
#include "evguard/detector/mlp.hpp"
#include "evguard/detector/model.hpp"
#include "evguard/detector/optimizer.hpp"
#include "evguard/detector/train.hpp"
