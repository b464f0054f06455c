/**
 * Page bootstrap: one controller per tab, all sharing a same-origin API
 * client (the service serves these assets, so no base URL is needed).
 */

import './styles.css';
import { ApiClient } from './api';
import { $ } from './dom';
import { SensitivityChart } from './sensitivity';
import { WhatifPanel } from './whatif';
import { Wizard } from './wizard';

const api = new ApiClient('');

const tabs = Array.from(document.querySelectorAll<HTMLButtonElement>('nav [data-tab]'));
for (const tab of tabs) {
  tab.addEventListener('click', () => {
    for (const other of tabs) {
      other.classList.toggle('active', other === tab);
      $(`#${other.dataset.tab!}`).hidden = other !== tab;
    }
  });
}

void new Wizard($('#wizard'), api).mount();
void new WhatifPanel($('#whatif'), api).mount();
void new SensitivityChart($('#sensitivity'), api).mount();
