#!/usr/bin/env python3

from . runner import run

if __name__ == '__main__':
    run()

